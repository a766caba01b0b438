#ifndef DAVOC_COMMON_HASH_H_
#define DAVOC_COMMON_HASH_H_

#include <cstdint>
#include <string>
#include <string_view>

namespace davoc {

// 64-bit FNV-1a.
uint64_t Fnv1a64(std::string_view bytes, uint64_t h = 0xcbf29ce484222325ULL);
uint64_t HashFile(const std::string& path);
std::string HexDigest(uint64_t h);

}  // namespace davoc

#endif  // DAVOC_COMMON_HASH_H_
