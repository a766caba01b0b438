#ifndef DAVOC_DSP_FFT_H_
#define DAVOC_DSP_FFT_H_

#include <complex>
#include <span>
#include <vector>

namespace davoc {

bool IsPowerOfTwo(size_t n);
size_t NextPowerOfTwo(size_t n);

// In-place iterative radix-2 decimation-in-time FFT (forward, no scaling).
// data.size() must be a power of two.
void Fft(std::span<std::complex<double>> data);

}  // namespace davoc

#endif  // DAVOC_DSP_FFT_H_
