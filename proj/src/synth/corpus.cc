#include "davoc/synth/corpus.h"

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "davoc/common/error.h"
#include "davoc/common/matrix.h"
#include "davoc/common/rng.h"
#include "davoc/dsp/features.h"
#include "davoc/dsp/wav.h"
#include "davoc/eval/probe.h"

namespace davoc {

std::string_view SubsetName(Subset s) {
  switch (s) {
    case Subset::kSourceTrain: return "source_train";
    case Subset::kSourceTest: return "source_test";
    case Subset::kTargetAdapt: return "target_adapt";
    case Subset::kTargetTest: return "target_test";
  }
  return "";
}

Subset ParseSubset(std::string_view s) {
  if (s == "source_train") return Subset::kSourceTrain;
  if (s == "source_test") return Subset::kSourceTest;
  if (s == "target_adapt") return Subset::kTargetAdapt;
  if (s == "target_test") return Subset::kTargetTest;
  throw DataError("unknown subset '" + std::string(s) + "'");
}

CorpusSpec CorpusSpec::FullShape() { return CorpusSpec{}; }

CorpusSpec CorpusSpec::CiScale() {
  CorpusSpec s;
  s.source_pathological = 10;
  s.source_control = 10;
  s.target_pathological = 6;
  s.target_control = 4;
  s.source_test_pathological = 2;
  s.source_test_control = 2;
  s.target_test_pathological = 3;
  s.target_test_control = 2;
  return s;
}

int CorpusSpec::Total() const {
  return source_pathological + source_control + target_pathological +
         target_control;
}

void CorpusSpec::Validate() const {
  auto check = [](int total, int test, const char* what) {
    if (total < 0 || test < 0 || test > total) {
      throw ConfigError(std::string("invalid counts for ") + what);
    }
  };
  check(source_pathological, source_test_pathological, "source pathological");
  check(source_control, source_test_control, "source control");
  check(target_pathological, target_test_pathological, "target pathological");
  check(target_control, target_test_control, "target control");
  if (!(duration_s > 0.0) || sample_rate <= 0) {
    throw ConfigError("invalid duration or sample rate");
  }
  for (const VoiceQualityRanges* r : {&control, &pathological}) {
    for (const Range* x : {&r->jitter, &r->shimmer, &r->hnr_db}) {
      if (!(x->lo <= x->hi)) throw ConfigError("inverted parameter range");
    }
  }
  if (control.jitter.hi > pathological.jitter.lo ||
      control.shimmer.hi > pathological.shimmer.lo ||
      control.hnr_db.lo < pathological.hnr_db.hi) {
    throw ConfigError("control and pathological voice ranges overlap");
  }
  if (source_profile.name != Device::kSource ||
      target_profile.name != Device::kTarget) {
    throw ConfigError("device profiles are tagged with the wrong device");
  }
  source_profile.Validate();
  target_profile.Validate();
}

namespace {

struct Slot {
  Device device;
  Label label;
  Subset subset;
};

void AddSlots(std::vector<Slot>& slots, Device device, Label label, int total,
              int test) {
  const Subset train_subset =
      device == Device::kSource ? Subset::kSourceTrain : Subset::kTargetAdapt;
  const Subset test_subset =
      device == Device::kSource ? Subset::kSourceTest : Subset::kTargetTest;
  for (int i = 0; i < total; ++i) {
    slots.push_back({device, label, i < total - test ? train_subset : test_subset});
  }
}

VoiceSpec DrawVoice(const CorpusSpec& spec, Label label, Rng& rng) {
  VoiceSpec v;
  v.label = label;
  v.duration_s = spec.duration_s;
  v.sample_rate = spec.sample_rate;
  // Half the speakers are drawn from a lower and half from a higher f0 and
  // vocal-tract register.
  const bool high = Uniform01(rng) < 0.5;
  v.f0_hz = high ? UniformRange(rng, 170.0, 250.0) : UniformRange(rng, 90.0, 150.0);
  const double tract = high ? UniformRange(rng, 0.80, 0.92)
                            : UniformRange(rng, 0.95, 1.10);
  v.formants = VowelAFormants(tract);
  const VoiceQualityRanges& r =
      label == Label::kPathological ? spec.pathological : spec.control;
  v.jitter = UniformRange(rng, r.jitter.lo, r.jitter.hi);
  v.shimmer = UniformRange(rng, r.shimmer.lo, r.shimmer.hi);
  v.hnr_db = UniformRange(rng, r.hnr_db.lo, r.hnr_db.hi);
  return v;
}

std::string MakeId(const Slot& s, int index) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%s_%s_%03d",
                s.device == Device::kSource ? "src" : "tgt",
                s.label == Label::kPathological ? "path" : "ctrl", index);
  return buf;
}

}  // namespace

Corpus GenerateCorpus(const CorpusSpec& spec, uint64_t seed) {
  spec.Validate();
  std::vector<Slot> slots;
  AddSlots(slots, Device::kSource, Label::kPathological,
           spec.source_pathological, spec.source_test_pathological);
  AddSlots(slots, Device::kSource, Label::kControl, spec.source_control,
           spec.source_test_control);
  AddSlots(slots, Device::kTarget, Label::kPathological,
           spec.target_pathological, spec.target_test_pathological);
  AddSlots(slots, Device::kTarget, Label::kControl, spec.target_control,
           spec.target_test_control);

  Corpus corpus;
  corpus.entries.reserve(slots.size());
  for (size_t i = 0; i < slots.size(); ++i) {
    const Slot& slot = slots[i];
    const uint64_t utt_seed = MixSeed(seed, i);
    Rng rng = MakeRng(utt_seed, 0);
    CorpusEntry e;
    e.id = MakeId(slot, static_cast<int>(i));
    e.subset = slot.subset;
    e.voice = DrawVoice(spec, slot.label, rng);
    e.clean = SynthVowel(e.voice, utt_seed);
    const double level =
        std::pow(10.0, UniformRange(rng, spec.level_db.lo, spec.level_db.hi) / 20.0);
    for (double& s : e.clean.samples) s *= level;
    e.clean.id = e.id;
    e.clean.device = slot.device;
    const DeviceProfile& profile =
        slot.device == Device::kSource ? spec.source_profile : spec.target_profile;
    e.recorded = ApplyChannel(e.clean, profile, utt_seed);
    QuantizePcm16(e.recorded.samples);
    corpus.entries.push_back(std::move(e));
  }
  return corpus;
}

void WriteManifest(const std::string& path,
                   const std::vector<ManifestRow>& rows) {
  std::ofstream out(path);
  if (!out) throw DataError("cannot write " + path);
  out << "id,path,device,label,subset\n";
  for (const ManifestRow& r : rows) {
    out << r.id << ',' << r.path << ',' << DeviceName(r.device) << ','
        << LabelName(r.label) << ',' << SubsetName(r.subset) << '\n';
  }
  if (!out) throw DataError("short write to " + path);
}

std::vector<ManifestRow> ReadManifest(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open manifest " + path);
  std::string line;
  if (!std::getline(in, line) || line != "id,path,device,label,subset") {
    throw DataError(path + ": unexpected manifest header");
  }
  std::vector<ManifestRow> rows;
  int line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    std::vector<std::string> fields;
    std::stringstream ss(line);
    std::string f;
    while (std::getline(ss, f, ',')) fields.push_back(f);
    if (fields.size() != 5) {
      throw DataError(path + ":" + std::to_string(line_no) +
                      ": expected 5 fields");
    }
    rows.push_back({fields[0], fields[1], ParseDevice(fields[2]),
                    ParseLabel(fields[3]), ParseSubset(fields[4])});
  }
  return rows;
}

std::string WriteCorpus(const Corpus& corpus, const std::string& dir) {
  namespace fs = std::filesystem;
  std::error_code ec;
  fs::create_directories(fs::path(dir) / "wav", ec);
  if (ec) throw DataError("cannot create " + dir + ": " + ec.message());
  std::vector<ManifestRow> rows;
  for (const CorpusEntry& e : corpus.entries) {
    const std::string rel = "wav/" + e.id + ".wav";
    WriteWav((fs::path(dir) / rel).string(), e.recorded.samples,
             e.recorded.sample_rate);
    rows.push_back({e.id, rel, e.recorded.device, *e.recorded.label, e.subset});
  }
  const std::string manifest = (fs::path(dir) / "manifest.csv").string();
  WriteManifest(manifest, rows);
  return manifest;
}

std::vector<LoadedUtterance> RecordedUtterances(const Corpus& corpus) {
  std::vector<LoadedUtterance> out;
  out.reserve(corpus.entries.size());
  for (const CorpusEntry& e : corpus.entries) out.push_back({e.recorded, e.subset});
  return out;
}

std::vector<LoadedUtterance> LoadManifestAudio(const std::string& manifest_path) {
  namespace fs = std::filesystem;
  const fs::path base = fs::path(manifest_path).parent_path();
  std::vector<LoadedUtterance> out;
  for (const ManifestRow& r : ReadManifest(manifest_path)) {
    LoadedUtterance lu;
    lu.utterance = ReadWav((base / r.path).string());
    lu.utterance.id = r.id;
    lu.utterance.device = r.device;
    lu.utterance.label = r.label;
    lu.subset = r.subset;
    out.push_back(std::move(lu));
  }
  return out;
}

namespace {

RowVector FilterbankMean(const Utterance& utt) {
  FeatureConfig cfg;
  cfg.kind = FeatureKind::kFilterBank;
  return LogFilterbankFeatures(utt, cfg).data.colwise().mean();
}

}  // namespace

CorpusSelfTest RunCorpusSelfTest(const Corpus& corpus, uint64_t seed) {
  const auto n = static_cast<Eigen::Index>(corpus.entries.size());
  Matrix recorded(n, 40), clean(n, 40);
  std::vector<int> device(n), label(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    const CorpusEntry& e = corpus.entries[i];
    recorded.row(i) = FilterbankMean(e.recorded);
    clean.row(i) = FilterbankMean(e.clean);
    device[i] = e.recorded.device == Device::kTarget ? 1 : 0;
    label[i] = *e.recorded.label == Label::kPathological ? 1 : 0;
  }
  CorpusSelfTest r;
  r.device_probe_accuracy = CrossValidatedAccuracy(recorded, device, 5, seed);
  r.pathology_probe_accuracy = CrossValidatedAccuracy(clean, label, 5, seed);
  return r;
}

}  // namespace davoc
