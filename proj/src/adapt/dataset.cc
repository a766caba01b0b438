#include "davoc/adapt/dataset.h"

#include <fstream>
#include <set>
#include <unordered_map>

#include "davoc/common/error.h"

namespace davoc {

Matrix PrepareModelInput(const Utterance& utt, const FeatureConfig& config,
                         ModelKind kind) {
  FeatureMatrix fm = ExtractFeatures(utt, config);
  if (kind == ModelKind::kBlstm) fm = StackContext(fm, config.context);
  return std::move(fm.data);
}

int ModelInputDim(const FeatureConfig& config, ModelKind kind) {
  return kind == ModelKind::kBlstm ? config.StackedDims() : config.BaseDims();
}

namespace {

void Route(DomainData& data, Subset subset, Sample s) {
  switch (subset) {
    case Subset::kSourceTrain: data.source_train.push_back(std::move(s)); break;
    case Subset::kSourceTest: data.source_test.push_back(std::move(s)); break;
    case Subset::kTargetAdapt: data.target_adapt.push_back(std::move(s)); break;
    case Subset::kTargetTest: data.target_test.push_back(std::move(s)); break;
  }
}

Sample MakeSample(const Utterance& u, const FeatureConfig& config,
                  ModelKind kind) {
  return {u.id, PrepareModelInput(u, config, kind), u.device, u.label};
}

}  // namespace

DomainData BuildDomainData(std::span<const LoadedUtterance> utterances,
                           const FeatureConfig& config, ModelKind kind) {
  DomainData data;
  for (const LoadedUtterance& lu : utterances) {
    Route(data, lu.subset, MakeSample(lu.utterance, config, kind));
  }
  return data;
}

DomainData BuildDomainData(const Corpus& corpus, const FeatureConfig& config,
                           ModelKind kind) {
  DomainData data;
  for (const CorpusEntry& e : corpus.entries) {
    Route(data, e.subset, MakeSample(e.recorded, config, kind));
  }
  return data;
}

void DomainSplit::Validate() const {
  std::set<std::string> seen;
  for (const auto* list : {&source_train, &source_test, &target_adapt, &target_test}) {
    for (const std::string& id : *list) {
      if (!seen.insert(id).second) {
        throw DataError("utterance '" + id + "' appears in two subsets");
      }
    }
  }
}

DomainSplit SplitOf(const DomainData& data) {
  DomainSplit split;
  auto ids = [](const std::vector<Sample>& v) {
    std::vector<std::string> out;
    for (const Sample& s : v) out.push_back(s.id);
    return out;
  };
  split.source_train = ids(data.source_train);
  split.source_test = ids(data.source_test);
  split.target_adapt = ids(data.target_adapt);
  split.target_test = ids(data.target_test);
  return split;
}

void WriteSplitFile(const std::string& path, const DomainSplit& split) {
  split.Validate();
  std::ofstream out(path);
  if (!out) throw DataError("cannot write " + path);
  auto section = [&](const char* name, const std::vector<std::string>& ids) {
    out << '[' << name << "]\n";
    for (const std::string& id : ids) out << id << '\n';
  };
  section("source_train", split.source_train);
  section("source_test", split.source_test);
  section("target_adapt", split.target_adapt);
  section("target_test", split.target_test);
}

DomainSplit ReadSplitFile(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open split file " + path);
  DomainSplit split;
  std::vector<std::string>* current = nullptr;
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    if (line.front() == '[') {
      if (line.back() != ']') throw DataError(path + ": bad section header");
      switch (ParseSubset(line.substr(1, line.size() - 2))) {
        case Subset::kSourceTrain: current = &split.source_train; break;
        case Subset::kSourceTest: current = &split.source_test; break;
        case Subset::kTargetAdapt: current = &split.target_adapt; break;
        case Subset::kTargetTest: current = &split.target_test; break;
      }
      continue;
    }
    if (current == nullptr) throw DataError(path + ": id before any section");
    current->push_back(line);
  }
  split.Validate();
  return split;
}

DomainData ApplySplit(DomainData data, const DomainSplit& split) {
  split.Validate();
  std::unordered_map<std::string, Sample> by_id;
  for (auto* list : {&data.source_train, &data.source_test, &data.target_adapt,
                     &data.target_test}) {
    for (Sample& s : *list) by_id.emplace(s.id, std::move(s));
  }
  DomainData out;
  auto take = [&](const std::vector<std::string>& ids, std::vector<Sample>& dst) {
    for (const std::string& id : ids) {
      auto it = by_id.find(id);
      if (it == by_id.end()) throw DataError("split names unknown id '" + id + "'");
      dst.push_back(std::move(it->second));
      by_id.erase(it);
    }
  };
  take(split.source_train, out.source_train);
  take(split.source_test, out.source_test);
  take(split.target_adapt, out.target_adapt);
  take(split.target_test, out.target_test);
  return out;
}

int LabelAccess::Read(const Sample& s) {
  if (s.device == Device::kTarget) {
    ++target_reads_;
  } else {
    ++source_reads_;
  }
  if (!s.label) {
    throw Error(ErrorKind::kData,
                "label of '" + s.id + "' was erased and must not be read");
  }
  return static_cast<int>(*s.label);
}

std::vector<Sample> EraseLabels(std::span<const Sample> samples) {
  std::vector<Sample> out(samples.begin(), samples.end());
  for (Sample& s : out) s.label.reset();
  return out;
}

}  // namespace davoc
