#ifndef DAVOC_SYNTH_CHANNEL_H_
#define DAVOC_SYNTH_CHANNEL_H_

#include <cstdint>
#include <limits>
#include <vector>

#include "davoc/dsp/utterance.h"

namespace davoc {

// A simulated recording chain. Stages, in order: FIR coloration, spectral
// tilt around 1 kHz plus a smooth low-pass at bandlimit_hz (applied together
// as one zero-phase frequency-domain gain), then additive noise whose RMS is
// noise_floor_db relative to full scale. The noise is white unless
// noise_band_hz is set, in which case it is band-pass shaped to that range.
// Each recording draws its noise level uniformly from
// [noise_floor_db - noise_spread_db, noise_floor_db]. A Gaussian-shaped
// resonance centred at resonance_hz with a per-recording gain drawn from
// [0, resonance_max_db] precedes the noise; resonance_max_db = 0 disables it.
//   spectral_tilt_db_per_octave = 0 and bandlimit_hz <= 0 disable the gain
//   noise_floor_db = -infinity disables the noise
struct DeviceProfile {
  Device name = Device::kSource;
  double spectral_tilt_db_per_octave = 0.0;
  double bandlimit_hz = 0.0;
  double noise_floor_db = -std::numeric_limits<double>::infinity();
  double noise_spread_db = 0.0;
  double noise_band_lo_hz = 0.0;  // lo = hi = 0: white
  double noise_band_hi_hz = 0.0;
  double resonance_hz = 3000.0;
  double resonance_width_hz = 800.0;
  double resonance_max_db = 0.0;
  std::vector<double> impulse_response{1.0};

  void Validate() const;

  // Unit IR, no tilt, no band limit, no noise.
  static DeviceProfile Identity(Device name);
  // Studio microphone: flat, wide band, very low noise.
  static DeviceProfile DefaultSource();
  // Smartphone: FIR coloration, -4.5 dB/octave tilt, -80 dB noise floor.
  static DeviceProfile DefaultTarget();
};

// Scales an impulse response so the peak of its magnitude response is 1.
std::vector<double> NormalizeToUnitPeakGain(std::vector<double> ir);

// Peak of |H(e^{jw})| over a dense frequency grid.
double PeakGain(const std::vector<double>& ir);

// Passes the utterance through the profile and tags it with profile.name.
Utterance ApplyChannel(const Utterance& utt, const DeviceProfile& profile,
                       uint64_t seed);

}  // namespace davoc

#endif  // DAVOC_SYNTH_CHANNEL_H_
