#ifndef DAVOC_SYNTH_VOICE_H_
#define DAVOC_SYNTH_VOICE_H_

#include <cstdint>
#include <limits>
#include <vector>

#include "davoc/dsp/utterance.h"

namespace davoc {

struct Formant {
  double center_hz;
  double bandwidth_hz;
};

// Source-filter description of one sustained vowel.
//   jitter:  local jitter, mean |P_k - P_{k-1}| / mean P (fraction)
//   shimmer: local shimmer, mean |A_k - A_{k-1}| / mean A (fraction)
//   hnr_db:  glottal-flow harmonic power over aspiration-noise power;
//            +infinity means no noise
struct VoiceSpec {
  double f0_hz = 120.0;
  double jitter = 0.0;
  double shimmer = 0.0;
  double hnr_db = std::numeric_limits<double>::infinity();
  std::vector<Formant> formants;
  double duration_s = 0.5;
  int sample_rate = 44100;
  Label label = Label::kControl;

  void Validate() const;
};

// Typical /a/ formants for a vocal tract scaled by `tract_scale` (1 = adult
// male reference).
std::vector<Formant> VowelAFormants(double tract_scale);

// Impulse-train glottal source with per-period jitter and shimmer, shaped by
// a two-pole glottal low-pass, plus white aspiration noise at hnr_db; then a
// cascade of second-order formant resonators and lip radiation (first
// difference). Peak-normalized to 0.9. Throws ConfigError for a formant that
// would make an unstable or degenerate resonator.
Utterance SynthVowel(const VoiceSpec& spec, uint64_t seed);

// Glottal pulse onsets (in samples, fractional) that SynthVowel would place
// for this spec and seed.
std::vector<double> GlottalPulseTimes(const VoiceSpec& spec, uint64_t seed);

}  // namespace davoc

#endif  // DAVOC_SYNTH_VOICE_H_
