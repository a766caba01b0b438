#include "davoc/dsp/utterance.h"

#include <cmath>

#include "davoc/common/error.h"

namespace davoc {

std::string_view DeviceName(Device d) {
  return d == Device::kSource ? "source" : "target";
}

std::string_view LabelName(Label l) {
  return l == Label::kPathological ? "pathological" : "control";
}

Device ParseDevice(std::string_view s) {
  if (s == "source") return Device::kSource;
  if (s == "target") return Device::kTarget;
  throw DataError("unknown device '" + std::string(s) + "'");
}

Label ParseLabel(std::string_view s) {
  if (s == "pathological" || s == "1") return Label::kPathological;
  if (s == "control" || s == "0") return Label::kControl;
  throw DataError("unknown label '" + std::string(s) + "'");
}

void Utterance::Validate() const {
  if (samples.empty()) throw DataError("utterance '" + id + "' has no samples");
  if (sample_rate <= 0) {
    throw DataError("utterance '" + id + "' has non-positive sample rate");
  }
  for (double s : samples) {
    if (!std::isfinite(s)) {
      throw DataError("utterance '" + id + "' has non-finite samples");
    }
  }
}

}  // namespace davoc
