#include "davoc/synth/channel.h"

#include <algorithm>
#include <cmath>
#include <complex>
#include <numbers>

#include "davoc/common/error.h"
#include "davoc/common/rng.h"
#include "davoc/dsp/fft.h"

namespace davoc {
namespace {

constexpr double kTiltReferenceHz = 1000.0;
constexpr double kTiltFloorHz = 50.0;
constexpr int kLowpassOrder = 8;
constexpr int kNoiseBandOrder = 4;

void InverseFft(std::vector<std::complex<double>>& data) {
  for (auto& v : data) v = std::conj(v);
  Fft(data);
  const double scale = 1.0 / static_cast<double>(data.size());
  for (auto& v : data) v = std::conj(v) * scale;
}

double ShapingGain(double hz, const DeviceProfile& p) {
  double gain = 1.0;
  if (p.spectral_tilt_db_per_octave != 0.0) {
    const double octaves =
        std::log2(std::max(hz, kTiltFloorHz) / kTiltReferenceHz);
    gain *= std::pow(10.0, p.spectral_tilt_db_per_octave * octaves / 20.0);
  }
  if (p.bandlimit_hz > 0.0) {
    gain /= std::sqrt(1.0 + std::pow(hz / p.bandlimit_hz, 2 * kLowpassOrder));
  }
  return gain;
}

double NoiseBandGain(double hz, const DeviceProfile& p) {
  const double lo = std::max(hz / p.noise_band_lo_hz, 1e-12);
  const double high_pass = 1.0 / std::sqrt(1.0 + std::pow(lo, -2 * kNoiseBandOrder));
  const double low_pass =
      1.0 / std::sqrt(1.0 + std::pow(hz / p.noise_band_hi_hz, 2 * kNoiseBandOrder));
  return high_pass * low_pass;
}

// Zero-phase real gain applied through one padded FFT.
template <typename Gain>
void ShapeSpectrum(std::vector<double>& x, int sample_rate, Gain gain) {
  const size_t n = x.size();
  const size_t size = NextPowerOfTwo(2 * n);
  std::vector<std::complex<double>> spec(size);
  for (size_t i = 0; i < n; ++i) spec[i] = x[i];
  Fft(spec);
  for (size_t k = 0; k <= size / 2; ++k) {
    const double g = gain(static_cast<double>(k) * sample_rate / size);
    spec[k] *= g;
    if (k != 0 && k != size / 2) spec[size - k] *= g;
  }
  InverseFft(spec);
  for (size_t i = 0; i < n; ++i) x[i] = spec[i].real();
}

}  // namespace

void DeviceProfile::Validate() const {
  if (impulse_response.empty()) throw ConfigError("empty impulse response");
  for (double v : impulse_response) {
    if (!std::isfinite(v)) throw ConfigError("non-finite impulse response");
  }
  if (std::abs(PeakGain(impulse_response) - 1.0) > 1e-9) {
    throw ConfigError("impulse response must have unit peak gain");
  }
  if (!std::isfinite(spectral_tilt_db_per_octave) || std::isnan(bandlimit_hz) ||
      std::isnan(noise_floor_db) || noise_floor_db > 0.0 ||
      !(noise_spread_db >= 0.0) || !(noise_band_lo_hz >= 0.0) ||
      !(noise_band_hi_hz >= noise_band_lo_hz) || !(resonance_max_db >= 0.0) ||
      !(resonance_width_hz > 0.0) || !(resonance_hz >= 0.0)) {
    throw ConfigError("invalid device profile");
  }
}

DeviceProfile DeviceProfile::Identity(Device name) {
  DeviceProfile p;
  p.name = name;
  return p;
}

DeviceProfile DeviceProfile::DefaultSource() {
  DeviceProfile p;
  p.name = Device::kSource;
  p.bandlimit_hz = 20000.0;
  p.noise_floor_db = -85.0;
  return p;
}

DeviceProfile DeviceProfile::DefaultTarget() {
  DeviceProfile p;
  p.name = Device::kTarget;
  p.spectral_tilt_db_per_octave = -4.5;
  p.noise_floor_db = -80.0;
  p.impulse_response = NormalizeToUnitPeakGain({1.0, 0.45, -0.25, 0.12});
  return p;
}

double PeakGain(const std::vector<double>& ir) {
  constexpr int kGrid = 4096;
  double peak = 0.0;
  for (int k = 0; k <= kGrid; ++k) {
    const double w = std::numbers::pi * k / kGrid;
    std::complex<double> h = 0.0;
    for (size_t n = 0; n < ir.size(); ++n) {
      h += ir[n] * std::polar(1.0, -w * static_cast<double>(n));
    }
    peak = std::max(peak, std::abs(h));
  }
  return peak;
}

std::vector<double> NormalizeToUnitPeakGain(std::vector<double> ir) {
  const double peak = PeakGain(ir);
  if (!(peak > 0.0)) throw ConfigError("impulse response has zero gain");
  for (double& v : ir) v /= peak;
  return ir;
}

Utterance ApplyChannel(const Utterance& utt, const DeviceProfile& profile,
                       uint64_t seed) {
  profile.Validate();
  Utterance out = utt;
  out.device = profile.name;
  const size_t n = utt.samples.size();

  const std::vector<double>& ir = profile.impulse_response;
  if (!(ir.size() == 1 && ir[0] == 1.0)) {
    for (size_t i = 0; i < n; ++i) {
      double acc = 0.0;
      for (size_t k = 0; k < ir.size() && k <= i; ++k) {
        acc += ir[k] * utt.samples[i - k];
      }
      out.samples[i] = acc;
    }
  }

  if (profile.spectral_tilt_db_per_octave != 0.0 || profile.bandlimit_hz > 0.0) {
    ShapeSpectrum(out.samples, utt.sample_rate,
                  [&](double hz) { return ShapingGain(hz, profile); });
  }

  if (profile.resonance_max_db > 0.0) {
    Rng rng = MakeRng(seed, 4);
    const double gain_db = profile.resonance_max_db * Uniform01(rng);
    ShapeSpectrum(out.samples, utt.sample_rate, [&](double hz) {
      const double u = (hz - profile.resonance_hz) / profile.resonance_width_hz;
      return std::pow(10.0, gain_db * std::exp(-0.5 * u * u) / 20.0);
    });
  }

  if (std::isfinite(profile.noise_floor_db)) {
    Rng rng = MakeRng(seed, 3);
    const double level_db =
        profile.noise_floor_db - profile.noise_spread_db * Uniform01(rng);
    std::vector<double> noise(n);
    for (double& v : noise) v = Gaussian(rng);
    if (profile.noise_band_hi_hz > 0.0) {
      ShapeSpectrum(noise, utt.sample_rate,
                    [&](double hz) { return NoiseBandGain(hz, profile); });
      double power = 0.0;
      for (double v : noise) power += v * v;
      const double rms = std::sqrt(power / static_cast<double>(n));
      if (rms > 0.0) {
        for (double& v : noise) v /= rms;
      }
    }
    const double rms = std::pow(10.0, level_db / 20.0);
    for (size_t i = 0; i < n; ++i) out.samples[i] += rms * noise[i];
  }
  return out;
}

}  // namespace davoc
