#ifndef DAVOC_SYNTH_CORPUS_H_
#define DAVOC_SYNTH_CORPUS_H_

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "davoc/dsp/utterance.h"
#include "davoc/synth/channel.h"
#include "davoc/synth/voice.h"

namespace davoc {

enum class Subset { kSourceTrain, kSourceTest, kTargetAdapt, kTargetTest };

std::string_view SubsetName(Subset s);
Subset ParseSubset(std::string_view s);

struct Range {
  double lo;
  double hi;
};

// Voice-quality parameter region for one class. Pathological and control
// regions do not overlap.
struct VoiceQualityRanges {
  Range jitter;
  Range shimmer;
  Range hnr_db;
};

struct CorpusSpec {
  // Per-domain class counts and how many of each go to the test split.
  int source_pathological = 133;
  int source_control = 50;
  int target_pathological = 52;
  int target_control = 20;
  int source_test_pathological = 27;
  int source_test_control = 10;
  int target_test_pathological = 26;
  int target_test_control = 10;

  double duration_s = 0.5;
  int sample_rate = 44100;
  VoiceQualityRanges control{{0.0, 0.005}, {0.01, 0.03}, {20.0, 30.0}};
  VoiceQualityRanges pathological{{0.01, 0.05}, {0.04, 0.12}, {4.0, 16.0}};
  // Recording level relative to the synthesized peak, drawn per utterance.
  Range level_db{-12.0, 0.0};
  DeviceProfile source_profile = DeviceProfile::DefaultSource();
  DeviceProfile target_profile = DeviceProfile::DefaultTarget();

  // 183 source (133 pathological / 50 control, 37 held out) and 72 target
  // (52 / 20, 36 held out) recordings.
  static CorpusSpec FullShape();
  // 10+10 source and 6+4 target recordings for fast checks.
  static CorpusSpec CiScale();

  int Total() const;
  void Validate() const;
};

struct CorpusEntry {
  std::string id;
  Subset subset;
  VoiceSpec voice;
  Utterance clean;     // before the device channel
  Utterance recorded;  // after the channel, PCM16-quantized
};

struct Corpus {
  std::vector<CorpusEntry> entries;
};

// Deterministic in (spec, seed): utterance i uses seed MixSeed(seed, i) for
// every random draw, so generation order never matters. Every utterance is a
// distinct simulated speaker.
Corpus GenerateCorpus(const CorpusSpec& spec, uint64_t seed);

struct ManifestRow {
  std::string id;
  std::string path;  // relative to the manifest directory
  Device device;
  Label label;
  Subset subset;
};

// CSV header: id,path,device,label,subset
void WriteManifest(const std::string& path, const std::vector<ManifestRow>& rows);
std::vector<ManifestRow> ReadManifest(const std::string& path);

// Writes <dir>/wav/<id>.wav for every entry plus <dir>/manifest.csv and
// returns the manifest path.
std::string WriteCorpus(const Corpus& corpus, const std::string& dir);

struct LoadedUtterance {
  Utterance utterance;  // label and device filled from the manifest
  Subset subset;
};

std::vector<LoadedUtterance> LoadManifestAudio(const std::string& manifest_path);
// The recorded audio of an in-memory corpus, as if loaded from its manifest.
std::vector<LoadedUtterance> RecordedUtterances(const Corpus& corpus);

struct CorpusSelfTest {
  double device_probe_accuracy = 0.0;     // recorded audio, source vs target
  double pathology_probe_accuracy = 0.0;  // clean audio, pathological vs control
};

// Linear probes on per-utterance means of 40-dim log filter-bank features,
// scored by 5-fold cross-validated balanced accuracy.
CorpusSelfTest RunCorpusSelfTest(const Corpus& corpus, uint64_t seed);

}  // namespace davoc

#endif  // DAVOC_SYNTH_CORPUS_H_
