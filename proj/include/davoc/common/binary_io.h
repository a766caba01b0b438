#ifndef DAVOC_COMMON_BINARY_IO_H_
#define DAVOC_COMMON_BINARY_IO_H_

#include <bit>
#include <cstdint>
#include <cstring>
#include <istream>
#include <ostream>
#include <string>

#include "davoc/common/error.h"

// Little-endian primitives shared by the feature cache and checkpoint files.
namespace davoc::binio {

template <typename T>
T ToLittle(T v) {
  if constexpr (std::endian::native == std::endian::big) {
    unsigned char b[sizeof(T)];
    std::memcpy(b, &v, sizeof(T));
    for (size_t i = 0; i < sizeof(T) / 2; ++i) {
      std::swap(b[i], b[sizeof(T) - 1 - i]);
    }
    std::memcpy(&v, b, sizeof(T));
  }
  return v;
}

inline void WriteU32(std::ostream& out, uint32_t v) {
  v = ToLittle(v);
  out.write(reinterpret_cast<const char*>(&v), sizeof(v));
}

inline void WriteF64(std::ostream& out, double v) {
  uint64_t bits = std::bit_cast<uint64_t>(v);
  bits = ToLittle(bits);
  out.write(reinterpret_cast<const char*>(&bits), sizeof(bits));
}

inline void WriteString(std::ostream& out, const std::string& s) {
  WriteU32(out, static_cast<uint32_t>(s.size()));
  out.write(s.data(), static_cast<std::streamsize>(s.size()));
}

inline void ReadExact(std::istream& in, void* dst, size_t n,
                      const char* what) {
  in.read(static_cast<char*>(dst), static_cast<std::streamsize>(n));
  if (static_cast<size_t>(in.gcount()) != n) {
    throw DataError(std::string("truncated file while reading ") + what);
  }
}

inline uint32_t ReadU32(std::istream& in, const char* what) {
  uint32_t v;
  ReadExact(in, &v, sizeof(v), what);
  return ToLittle(v);
}

inline double ReadF64(std::istream& in, const char* what) {
  uint64_t bits;
  ReadExact(in, &bits, sizeof(bits), what);
  return std::bit_cast<double>(ToLittle(bits));
}

inline std::string ReadString(std::istream& in, const char* what,
                              uint32_t max_len = 1u << 20) {
  const uint32_t n = ReadU32(in, what);
  if (n > max_len) throw DataError(std::string("implausible length for ") + what);
  std::string s(n, '\0');
  ReadExact(in, s.data(), n, what);
  return s;
}

inline void ExpectMagic(std::istream& in, const char (&magic)[5]) {
  char buf[4];
  ReadExact(in, buf, 4, "magic");
  if (std::memcmp(buf, magic, 4) != 0) {
    throw DataError(std::string("bad magic, expected ") + magic);
  }
}

}  // namespace davoc::binio

#endif  // DAVOC_COMMON_BINARY_IO_H_
