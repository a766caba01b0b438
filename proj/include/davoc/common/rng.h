#ifndef DAVOC_COMMON_RNG_H_
#define DAVOC_COMMON_RNG_H_

#include <cstdint>
#include <cmath>
#include <random>
#include <utility>

namespace davoc {

using Rng = std::mt19937_64;

// splitmix64 finalizer. Derives one sub-seed per consumer stream.
inline uint64_t MixSeed(uint64_t seed, uint64_t stream) {
  uint64_t z = seed + 0x9e3779b97f4a7c15ULL * (stream + 1);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

inline Rng MakeRng(uint64_t seed, uint64_t stream) {
  return Rng(MixSeed(seed, stream));
}

// Uniform double in [0, 1) built from the raw engine output. Unlike
// std::uniform_real_distribution this is specified bit-for-bit.
inline double Uniform01(Rng& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

inline double UniformRange(Rng& rng, double lo, double hi) {
  return lo + (hi - lo) * Uniform01(rng);
}

// Standard normal via Box-Muller (one value per call).
inline double Gaussian(Rng& rng) {
  double u1 = Uniform01(rng);
  const double u2 = Uniform01(rng);
  if (u1 < 1e-300) u1 = 1e-300;
  return std::sqrt(-2.0 * std::log(u1)) * std::cos(6.283185307179586 * u2);
}

// Index in [0, n) by rejection-free multiply-shift; deterministic everywhere.
inline size_t UniformIndex(Rng& rng, size_t n) {
  return static_cast<size_t>(Uniform01(rng) * static_cast<double>(n));
}

template <typename Vec>
void Shuffle(Vec& v, Rng& rng) {
  for (size_t i = v.size(); i > 1; --i) {
    const size_t j = UniformIndex(rng, i);
    std::swap(v[i - 1], v[j]);
  }
}

}  // namespace davoc

#endif  // DAVOC_COMMON_RNG_H_
