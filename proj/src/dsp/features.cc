#include "davoc/dsp/features.h"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <complex>
#include <numbers>

#include "davoc/common/error.h"
#include "davoc/dsp/fft.h"

namespace davoc {

std::string FeatureKindName(FeatureKind kind) {
  return kind == FeatureKind::kMfcc ? "mfcc" : "fbank";
}

FeatureKind ParseFeatureKind(const std::string& s) {
  if (s == "mfcc") return FeatureKind::kMfcc;
  if (s == "fbank" || s == "filterbank") return FeatureKind::kFilterBank;
  throw ConfigError("unknown feature kind '" + s + "'");
}

int FeatureConfig::WindowLength(int sample_rate) const {
  return static_cast<int>(std::lround(window_ms * sample_rate / 1000.0));
}

int FeatureConfig::FrameShift(int sample_rate) const {
  return WindowLength(sample_rate) / 2;
}

int FeatureConfig::FftSize(int sample_rate) const {
  return static_cast<int>(NextPowerOfTwo(WindowLength(sample_rate)));
}

int FeatureConfig::BaseDims() const {
  return kind == FeatureKind::kMfcc ? n_cepstra : n_mel_filters;
}

void FeatureConfig::Validate() const {
  if (!(window_ms > 0.0)) throw ConfigError("window_ms must be positive");
  if (n_mel_filters < 1) throw ConfigError("n_mel_filters must be >= 1");
  if (n_cepstra < 1 || n_cepstra > n_mel_filters) {
    throw ConfigError("n_cepstra must lie in [1, n_mel_filters]");
  }
  if (!(pre_emphasis >= 0.0 && pre_emphasis < 1.0)) {
    throw ConfigError("pre_emphasis must lie in [0, 1)");
  }
  if (context < 1 || context % 2 == 0) {
    throw ConfigError("context must be a positive odd count");
  }
}

std::string FeatureConfig::Tag() const {
  char window[32];
  std::snprintf(window, sizeof(window), "%g", window_ms);
  return FeatureKindName(kind) + "-" + window + "ms-" +
         (normalized ? "norm" : "raw");
}

std::vector<double> PreEmphasize(std::span<const double> signal, double coeff) {
  std::vector<double> out(signal.size());
  if (signal.empty()) return out;
  out[0] = signal[0];
  for (size_t n = 1; n < signal.size(); ++n) {
    out[n] = signal[n] - coeff * signal[n - 1];
  }
  return out;
}

std::vector<size_t> FrameStarts(size_t signal_length, int window_length,
                                int shift) {
  std::vector<size_t> starts;
  const auto win = static_cast<size_t>(window_length);
  const auto hop = static_cast<size_t>(std::max(shift, 1));
  if (signal_length < win) return starts;
  size_t start = 0;
  for (; start + win <= signal_length; start += hop) starts.push_back(start);
  // Samples past the last full frame go into one zero-padded tail frame.
  if (starts.back() + win < signal_length) starts.push_back(start);
  return starts;
}

Matrix FrameSignal(std::span<const double> signal, const FeatureConfig& config,
                   int sample_rate) {
  const int win = config.WindowLength(sample_rate);
  const int shift = config.FrameShift(sample_rate);
  if (win < 2) throw ConfigError("window shorter than two samples");
  if (signal.size() < static_cast<size_t>(win)) {
    throw DataError("signal of " + std::to_string(signal.size()) +
                    " samples is shorter than one window (" +
                    std::to_string(win) + ")");
  }
  const std::vector<size_t> starts = FrameStarts(signal.size(), win, shift);
  Matrix frames = Matrix::Zero(static_cast<Eigen::Index>(starts.size()), win);
  for (size_t f = 0; f < starts.size(); ++f) {
    const size_t n = std::min<size_t>(win, signal.size() - starts[f]);
    for (size_t i = 0; i < n; ++i) frames(f, i) = signal[starts[f] + i];
  }
  return frames;
}

std::vector<double> HammingWindow(int length) {
  std::vector<double> w(length, 1.0);
  if (length < 2) return w;
  for (int n = 0; n < length; ++n) {
    w[n] = 0.54 - 0.46 * std::cos(2.0 * std::numbers::pi * n / (length - 1));
  }
  return w;
}

Vector PowerSpectrum(std::span<const double> frame, int fft_size) {
  if (fft_size < 1 || static_cast<size_t>(fft_size) < frame.size()) {
    throw ConfigError("fft_size smaller than the frame");
  }
  const std::vector<double> window = HammingWindow(static_cast<int>(frame.size()));
  std::vector<std::complex<double>> buf(fft_size);
  for (size_t i = 0; i < frame.size(); ++i) buf[i] = frame[i] * window[i];
  Fft(buf);
  const int bins = fft_size / 2 + 1;
  Vector power(bins);
  for (int k = 0; k < bins; ++k) power[k] = std::norm(buf[k]) / fft_size;
  return power;
}

double HzToMel(double hz) { return 2595.0 * std::log10(1.0 + hz / 700.0); }

double MelToHz(double mel) {
  return 700.0 * (std::pow(10.0, mel / 2595.0) - 1.0);
}

namespace {

// n_filters + 2 mel-equispaced edge points from 0 Hz to Nyquist.
std::vector<double> MelEdgeFrequencies(int n_filters, int sample_rate) {
  const double mel_max = HzToMel(sample_rate / 2.0);
  std::vector<double> hz(n_filters + 2);
  for (int i = 0; i < n_filters + 2; ++i) {
    hz[i] = MelToHz(mel_max * i / (n_filters + 1));
  }
  return hz;
}

}  // namespace

std::vector<double> MelCenterFrequencies(int n_filters, int sample_rate) {
  const std::vector<double> edges = MelEdgeFrequencies(n_filters, sample_rate);
  return {edges.begin() + 1, edges.end() - 1};
}

Matrix MelFilterbankMatrix(int n_filters, int fft_size, int sample_rate) {
  if (n_filters < 1) throw ConfigError("n_filters must be >= 1");
  if (fft_size < 2 || sample_rate <= 0) {
    throw ConfigError("invalid fft size or sample rate");
  }
  const int bins = fft_size / 2 + 1;
  const std::vector<double> edges = MelEdgeFrequencies(n_filters, sample_rate);
  Matrix fb = Matrix::Zero(n_filters, bins);
  for (int m = 0; m < n_filters; ++m) {
    const double lo = edges[m], center = edges[m + 1], hi = edges[m + 2];
    bool any = false;
    for (int k = 0; k < bins; ++k) {
      const double f = static_cast<double>(k) * sample_rate / fft_size;
      double w = 0.0;
      if (f > lo && f <= center) {
        w = (f - lo) / (center - lo);
      } else if (f > center && f < hi) {
        w = (hi - f) / (hi - center);
      }
      if (w > 0.0) {
        fb(m, k) = w;
        any = true;
      }
    }
    if (!any) {
      throw ConfigError("mel filter " + std::to_string(m) + " of " +
                        std::to_string(n_filters) +
                        " is empty at fft size " + std::to_string(fft_size));
    }
  }
  return fb;
}

Matrix DctMatrix(int n_out, int n_in) {
  if (n_out < 1 || n_in < 1 || n_out > n_in) {
    throw ConfigError("DCT needs 1 <= n_out <= n_in");
  }
  Matrix d(n_out, n_in);
  for (int k = 0; k < n_out; ++k) {
    const double scale = std::sqrt((k == 0 ? 1.0 : 2.0) / n_in);
    for (int n = 0; n < n_in; ++n) {
      d(k, n) = scale * std::cos(std::numbers::pi * k * (2.0 * n + 1.0) /
                                 (2.0 * n_in));
    }
  }
  return d;
}

namespace {

Matrix LogMelFrames(const Utterance& utt, const FeatureConfig& config) {
  config.Validate();
  utt.Validate();
  const std::vector<double> emphasized =
      PreEmphasize(utt.samples, config.pre_emphasis);
  const Matrix frames = FrameSignal(emphasized, config, utt.sample_rate);
  const int fft_size = config.FftSize(utt.sample_rate);
  const Matrix fb =
      MelFilterbankMatrix(config.n_mel_filters, fft_size, utt.sample_rate);

  Matrix out(frames.rows(), config.n_mel_filters);
  for (Eigen::Index t = 0; t < frames.rows(); ++t) {
    const Vector power = PowerSpectrum(
        std::span<const double>(frames.row(t).data(), frames.cols()), fft_size);
    const Vector energies = fb * power;
    for (int m = 0; m < config.n_mel_filters; ++m) {
      out(t, m) = std::log(energies[m] + kLogFloor);
    }
  }
  return out;
}

}  // namespace

FeatureMatrix LogFilterbankFeatures(const Utterance& utt,
                                    const FeatureConfig& config) {
  if (config.kind != FeatureKind::kFilterBank) {
    throw ConfigError("LogFilterbankFeatures needs a filter-bank config");
  }
  return {LogMelFrames(utt, config), config, utt.id, 1};
}

FeatureMatrix MfccFeatures(const Utterance& utt, const FeatureConfig& config) {
  if (config.kind != FeatureKind::kMfcc) {
    throw ConfigError("MfccFeatures needs an MFCC config");
  }
  const Matrix log_mel = LogMelFrames(utt, config);
  const Matrix dct = DctMatrix(config.n_cepstra, config.n_mel_filters);
  return {log_mel * dct.transpose(), config, utt.id, 1};
}

FeatureMatrix NormalizeOverTime(const FeatureMatrix& features) {
  const Eigen::Index frames = features.data.rows();
  if (frames < 2) {
    throw DataError("normalization over time needs at least two frames (" +
                    features.utterance_id + ")");
  }
  FeatureMatrix out = features;
  for (Eigen::Index c = 0; c < features.data.cols(); ++c) {
    auto col = out.data.col(c);
    const double mean = col.mean();
    col.array() -= mean;
    const double stddev = std::sqrt(col.squaredNorm() / frames);
    if (stddev >= 1e-12) col /= stddev;
  }
  out.config.normalized = true;
  return out;
}

FeatureMatrix StackContext(const FeatureMatrix& features, int context) {
  if (context < 1 || context % 2 == 0) {
    throw ConfigError("context must be a positive odd count, got " +
                      std::to_string(context));
  }
  const Eigen::Index frames = features.data.rows();
  const Eigen::Index dims = features.data.cols();
  const int half = context / 2;
  FeatureMatrix out;
  out.config = features.config;
  out.utterance_id = features.utterance_id;
  out.stacked_context = features.stacked_context * context;
  out.data.resize(frames, dims * context);
  for (Eigen::Index t = 0; t < frames; ++t) {
    for (int j = -half; j <= half; ++j) {
      const Eigen::Index src = std::clamp<Eigen::Index>(t + j, 0, frames - 1);
      out.data.block(t, (j + half) * dims, 1, dims) = features.data.row(src);
    }
  }
  return out;
}

FeatureMatrix ExtractFeatures(const Utterance& utt,
                              const FeatureConfig& config) {
  FeatureMatrix fm = config.kind == FeatureKind::kMfcc
                         ? MfccFeatures(utt, config)
                         : LogFilterbankFeatures(utt, config);
  if (config.normalized) fm = NormalizeOverTime(fm);
  fm.config = config;
  return fm;
}

}  // namespace davoc
