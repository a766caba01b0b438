#include "davoc/synth/voice.h"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "davoc/common/error.h"
#include "davoc/common/rng.h"

namespace davoc {
namespace {

// Gaussian scale that makes E|e_k - e_{k-1}| equal `local` for iid N(0, s^2)
// perturbations: E|N(0, 2 s^2)| = 2 s / sqrt(pi).
double LocalToSigma(double local) {
  return local * std::sqrt(std::numbers::pi) / 2.0;
}

constexpr double kGlottalPole = 0.96;

struct Pulse {
  double time;
  double amplitude;
};

std::vector<Pulse> MakePulses(const VoiceSpec& spec, Rng& rng) {
  const double period = spec.sample_rate / spec.f0_hz;
  const double total = spec.duration_s * spec.sample_rate;
  const double jitter_sigma = LocalToSigma(spec.jitter);
  const double shimmer_sigma = LocalToSigma(spec.shimmer);
  std::vector<Pulse> pulses;
  double t = 0.0;
  while (t < total) {
    const double amp = std::max(0.1, 1.0 + shimmer_sigma * Gaussian(rng));
    pulses.push_back({t, amp});
    const double p = period * (1.0 + jitter_sigma * Gaussian(rng));
    t += std::max(p, 0.5 * period);
  }
  return pulses;
}

}  // namespace

void VoiceSpec::Validate() const {
  if (!(f0_hz > 0.0)) throw ConfigError("f0 must be positive");
  if (!(jitter >= 0.0) || !(shimmer >= 0.0)) {
    throw ConfigError("jitter and shimmer must be non-negative");
  }
  if (!(duration_s > 0.0)) throw ConfigError("duration must be positive");
  if (sample_rate <= 0) throw ConfigError("sample rate must be positive");
  if (std::isnan(hnr_db)) throw ConfigError("hnr_db is NaN");
  if (f0_hz >= sample_rate / 2.0) throw ConfigError("f0 above Nyquist");
  for (const Formant& f : formants) {
    if (!(f.center_hz > 0.0) || f.center_hz >= sample_rate / 2.0 ||
        !(f.bandwidth_hz > 0.0) || f.bandwidth_hz >= sample_rate / 2.0) {
      throw ConfigError("formant (" + std::to_string(f.center_hz) + " Hz, " +
                        std::to_string(f.bandwidth_hz) +
                        " Hz) gives an unstable resonator");
    }
  }
}

std::vector<Formant> VowelAFormants(double tract_scale) {
  // Reference /a/ values; formant frequencies scale inversely with length.
  const double s = 1.0 / tract_scale;
  return {{730.0 * s, 80.0},
          {1090.0 * s, 90.0},
          {2440.0 * s, 120.0},
          {3400.0 * s, 180.0},
          {4200.0 * s, 250.0}};
}

std::vector<double> GlottalPulseTimes(const VoiceSpec& spec, uint64_t seed) {
  spec.Validate();
  Rng rng = MakeRng(seed, 1);
  std::vector<double> times;
  for (const Pulse& p : MakePulses(spec, rng)) times.push_back(p.time);
  return times;
}

Utterance SynthVowel(const VoiceSpec& spec, uint64_t seed) {
  spec.Validate();
  const auto n = static_cast<size_t>(std::lround(spec.duration_s * spec.sample_rate));
  if (n < 2) throw ConfigError("duration shorter than two samples");

  Rng pulse_rng = MakeRng(seed, 1);
  Rng noise_rng = MakeRng(seed, 2);

  // Fractional-delay impulses: each pulse is split linearly between the two
  // neighbouring samples.
  std::vector<double> source(n, 0.0);
  for (const Pulse& p : MakePulses(spec, pulse_rng)) {
    const auto i = static_cast<size_t>(std::floor(p.time));
    const double frac = p.time - static_cast<double>(i);
    if (i < n) source[i] += p.amplitude * (1.0 - frac);
    if (i + 1 < n) source[i + 1] += p.amplitude * frac;
  }

  // Glottal flow: critically damped two-pole low-pass.
  std::vector<double> flow(n);
  double y1 = 0.0, y2 = 0.0;
  for (size_t i = 0; i < n; ++i) {
    const double y = source[i] + 2.0 * kGlottalPole * y1 -
                     kGlottalPole * kGlottalPole * y2;
    y2 = y1;
    y1 = y;
    flow[i] = y;
  }
  // Remove the flow's DC before measuring harmonic power.
  double mean = 0.0;
  for (double v : flow) mean += v;
  mean /= static_cast<double>(n);
  double power = 0.0;
  for (double& v : flow) {
    v -= mean;
    power += v * v;
  }
  power /= static_cast<double>(n);

  if (std::isfinite(spec.hnr_db)) {
    const double noise_rms = std::sqrt(power / std::pow(10.0, spec.hnr_db / 10.0));
    for (double& v : flow) v += noise_rms * Gaussian(noise_rng);
  }

  std::vector<double> signal = std::move(flow);
  const double T = 1.0 / spec.sample_rate;
  for (const Formant& f : spec.formants) {
    const double c = -std::exp(-2.0 * std::numbers::pi * f.bandwidth_hz * T);
    const double b = 2.0 * std::exp(-std::numbers::pi * f.bandwidth_hz * T) *
                     std::cos(2.0 * std::numbers::pi * f.center_hz * T);
    const double a = 1.0 - b - c;
    double r1 = 0.0, r2 = 0.0;
    for (double& v : signal) {
      const double y = a * v + b * r1 + c * r2;
      r2 = r1;
      r1 = y;
      v = y;
    }
  }

  // Lip radiation.
  double prev = 0.0;
  for (double& v : signal) {
    const double cur = v;
    v = cur - prev;
    prev = cur;
  }

  double peak = 0.0;
  for (double v : signal) peak = std::max(peak, std::abs(v));
  if (!(peak > 0.0) || !std::isfinite(peak)) {
    throw NumericError("vowel synthesis produced a degenerate signal");
  }
  for (double& v : signal) v *= 0.9 / peak;

  Utterance utt;
  utt.samples = std::move(signal);
  utt.sample_rate = spec.sample_rate;
  utt.label = spec.label;
  return utt;
}

}  // namespace davoc
