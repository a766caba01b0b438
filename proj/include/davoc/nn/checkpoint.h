#ifndef DAVOC_NN_CHECKPOINT_H_
#define DAVOC_NN_CHECKPOINT_H_

#include <cstdint>
#include <istream>
#include <map>
#include <ostream>
#include <string>
#include <vector>

#include "davoc/nn/param.h"

namespace davoc::nn {

// Self-describing binary checkpoint:
//   "DAVC" | version u32
//   | metadata count u32 | (key string, value string)*
//   | tensor count u32 | (name string, rank u32, dims u32*, f64 values)*
// Strings are u32 length-prefixed, all integers and floats little-endian.
// Metadata is kept sorted by key so a load/save round trip is byte-identical.
inline constexpr uint32_t kCheckpointVersion = 1;

struct NamedTensor {
  std::string name;
  std::vector<uint32_t> shape;
  std::vector<double> values;
};

struct Checkpoint {
  std::map<std::string, std::string> metadata;
  std::vector<NamedTensor> tensors;

  const std::string& Meta(const std::string& key) const;
};

void WriteCheckpoint(std::ostream& out, const Checkpoint& ckpt);
Checkpoint ReadCheckpoint(std::istream& in);
void SaveCheckpoint(const std::string& path, const Checkpoint& ckpt);
Checkpoint LoadCheckpoint(const std::string& path);

// Copies parameter values in and out by name; shapes must agree exactly.
std::vector<NamedTensor> ExportParams(const ParamList& params);
void ImportParams(const std::vector<NamedTensor>& tensors,
                  const ParamList& params);

}  // namespace davoc::nn

#endif  // DAVOC_NN_CHECKPOINT_H_
