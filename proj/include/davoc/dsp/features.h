#ifndef DAVOC_DSP_FEATURES_H_
#define DAVOC_DSP_FEATURES_H_

#include <span>
#include <string>
#include <vector>

#include "davoc/common/matrix.h"
#include "davoc/dsp/utterance.h"

namespace davoc {

enum class FeatureKind { kMfcc, kFilterBank };

std::string FeatureKindName(FeatureKind kind);
FeatureKind ParseFeatureKind(const std::string& s);

struct FeatureConfig {
  FeatureKind kind = FeatureKind::kFilterBank;
  double window_ms = 32.0;
  bool normalized = false;
  int n_mel_filters = 40;
  int n_cepstra = 26;
  double pre_emphasis = 0.97;
  int context = 11;

  // round(window_ms * sample_rate / 1000).
  int WindowLength(int sample_rate) const;
  // Half the window, rounded down.
  int FrameShift(int sample_rate) const;
  // Smallest power of two >= window length.
  int FftSize(int sample_rate) const;
  // Per-frame dimension before context stacking.
  int BaseDims() const;
  int StackedDims() const { return context * BaseDims(); }

  void Validate() const;
  // Compact human-readable tag, e.g. "fbank-32ms-raw".
  std::string Tag() const;

  bool operator==(const FeatureConfig&) const = default;
};

struct FeatureMatrix {
  Matrix data;  // frames x dims
  FeatureConfig config;
  std::string utterance_id;
  int stacked_context = 1;  // 1 until StackContext has been applied

  int frames() const { return static_cast<int>(data.rows()); }
  int dims() const { return static_cast<int>(data.cols()); }
};

// y[0] = x[0]; y[n] = x[n] - coeff * x[n-1].
std::vector<double> PreEmphasize(std::span<const double> signal, double coeff);

// Start offset of every frame produced by FrameSignal.
std::vector<size_t> FrameStarts(size_t signal_length, int window_length,
                                int shift);

// Overlapping frames of the configured window length, one per row. Frames
// start every FrameShift() samples; a trailing partial frame is zero-padded.
// Throws DataError if the signal is shorter than one window.
Matrix FrameSignal(std::span<const double> signal, const FeatureConfig& config,
                   int sample_rate);

// Symmetric Hamming window of the given length.
std::vector<double> HammingWindow(int length);

// Hamming-windows the frame, zero-pads it to fft_size and returns
// |DFT|^2 / fft_size for bins 0..fft_size/2.
Vector PowerSpectrum(std::span<const double> frame, int fft_size);

double HzToMel(double hz);
double MelToHz(double mel);

// Center frequencies (Hz) of n_filters triangles equally spaced on the mel
// scale between 0 Hz and sample_rate / 2 (the edges are excluded).
std::vector<double> MelCenterFrequencies(int n_filters, int sample_rate);

// n_filters x (fft_size/2 + 1) triangular filters. Each triangle rises from
// the previous center to 1 at its own center and falls to 0 at the next one;
// rows are the triangles sampled at the bin frequencies.
// Throws ConfigError if some filter would have no positive bin.
Matrix MelFilterbankMatrix(int n_filters, int fft_size, int sample_rate);

// Rows 0..n_out-1 of the orthonormal n_in-point DCT-II matrix.
Matrix DctMatrix(int n_out, int n_in);

inline constexpr double kLogFloor = 1e-10;

// log(mel . power + 1e-10) per frame. Requires kind == kFilterBank.
FeatureMatrix LogFilterbankFeatures(const Utterance& utt,
                                    const FeatureConfig& config);

// DCT-II of the log filter-bank frames, first n_cepstra coefficients kept
// (c0 included). Requires kind == kMfcc.
FeatureMatrix MfccFeatures(const Utterance& utt, const FeatureConfig& config);

// Per-utterance mean/variance normalization over frames. Columns whose
// (population) standard deviation is below 1e-12 are only mean-shifted.
// Throws DataError for fewer than two frames.
FeatureMatrix NormalizeOverTime(const FeatureMatrix& features);

// Row t becomes rows t-c/2 .. t+c/2 concatenated, with edge rows replicated.
// Throws ConfigError for even or non-positive context.
FeatureMatrix StackContext(const FeatureMatrix& features, int context);

// Front end as configured: MFCC or filter bank, then normalization if
// requested. Context stacking is left to the model input stage.
FeatureMatrix ExtractFeatures(const Utterance& utt,
                              const FeatureConfig& config);

}  // namespace davoc

#endif  // DAVOC_DSP_FEATURES_H_
