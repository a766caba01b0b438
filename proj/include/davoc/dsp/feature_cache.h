#ifndef DAVOC_DSP_FEATURE_CACHE_H_
#define DAVOC_DSP_FEATURE_CACHE_H_

#include <string>

#include "davoc/common/matrix.h"

namespace davoc {

// Flat cache layout: "DAVF", version u32, dims u32, frames u32, then
// frames*dims row-major little-endian float64 values.
inline constexpr uint32_t kFeatureCacheVersion = 1;

void WriteFeatureCache(const std::string& path, const Matrix& features);
Matrix ReadFeatureCache(const std::string& path);

}  // namespace davoc

#endif  // DAVOC_DSP_FEATURE_CACHE_H_
