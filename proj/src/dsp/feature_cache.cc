#include "davoc/dsp/feature_cache.h"

#include <fstream>

#include "davoc/common/binary_io.h"
#include "davoc/common/error.h"

namespace davoc {

void WriteFeatureCache(const std::string& path, const Matrix& features) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw DataError("cannot write " + path);
  out.write("DAVF", 4);
  binio::WriteU32(out, kFeatureCacheVersion);
  binio::WriteU32(out, static_cast<uint32_t>(features.cols()));
  binio::WriteU32(out, static_cast<uint32_t>(features.rows()));
  for (Eigen::Index r = 0; r < features.rows(); ++r) {
    for (Eigen::Index c = 0; c < features.cols(); ++c) {
      binio::WriteF64(out, features(r, c));
    }
  }
  if (!out) throw DataError("short write to " + path);
}

Matrix ReadFeatureCache(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot open " + path);
  binio::ExpectMagic(in, "DAVF");
  const uint32_t version = binio::ReadU32(in, "version");
  if (version != kFeatureCacheVersion) {
    throw DataError(path + ": unsupported feature cache version " +
                    std::to_string(version));
  }
  const uint32_t dims = binio::ReadU32(in, "dims");
  const uint32_t frames = binio::ReadU32(in, "frames");
  Matrix m(frames, dims);
  for (uint32_t r = 0; r < frames; ++r) {
    for (uint32_t c = 0; c < dims; ++c) m(r, c) = binio::ReadF64(in, "values");
  }
  return m;
}

}  // namespace davoc
