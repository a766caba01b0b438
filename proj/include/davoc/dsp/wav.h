#ifndef DAVOC_DSP_WAV_H_
#define DAVOC_DSP_WAV_H_

#include <span>
#include <string>

#include "davoc/common/error.h"
#include "davoc/dsp/utterance.h"

namespace davoc {

enum class WavErrorCode {
  kOpenFailed,
  kMalformedHeader,
  kUnsupportedCodec,
  kEmptyPayload,
};

class WavError : public Error {
 public:
  WavError(WavErrorCode code, const std::string& what)
      : Error(ErrorKind::kData, what), code_(code) {}
  WavErrorCode code() const { return code_; }

 private:
  WavErrorCode code_;
};

// Reads a RIFF/WAVE PCM16 file. Multi-channel audio is averaged to mono and
// samples are scaled by 1/32768. Device and label are left at defaults; the
// id is the file stem.
Utterance ReadWav(const std::string& path);

// Writes mono PCM16. Samples are scaled by 32768, rounded and clamped.
void WriteWav(const std::string& path, std::span<const double> samples,
              int sample_rate);

// Rounds samples to the PCM16 grid, i.e. what a WriteWav/ReadWav round trip
// would produce.
void QuantizePcm16(std::span<double> samples);

}  // namespace davoc

#endif  // DAVOC_DSP_WAV_H_
