#ifndef DAVOC_DSP_UTTERANCE_H_
#define DAVOC_DSP_UTTERANCE_H_

#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace davoc {

enum class Device { kSource = 0, kTarget = 1 };

// Class index 1 is the positive (pathological) class everywhere.
enum class Label { kControl = 0, kPathological = 1 };

std::string_view DeviceName(Device d);
std::string_view LabelName(Label l);
Device ParseDevice(std::string_view s);
Label ParseLabel(std::string_view s);

// One recording: the (x, d, y) triplet. Samples are amplitudes in [-1, 1].
struct Utterance {
  std::vector<double> samples;
  int sample_rate = 44100;
  Device device = Device::kSource;
  std::optional<Label> label;
  std::string id;

  // Throws DataError when a field invariant is violated.
  void Validate() const;
};

}  // namespace davoc

#endif  // DAVOC_DSP_UTTERANCE_H_
