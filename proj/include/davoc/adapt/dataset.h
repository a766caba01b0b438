#ifndef DAVOC_ADAPT_DATASET_H_
#define DAVOC_ADAPT_DATASET_H_

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "davoc/common/matrix.h"
#include "davoc/dsp/features.h"
#include "davoc/dsp/utterance.h"
#include "davoc/models/model_graph.h"
#include "davoc/synth/corpus.h"

namespace davoc {

// One model-ready utterance.
struct Sample {
  std::string id;
  Matrix features;  // context-stacked for the BLSTM, per-frame for the MLP
  Device device = Device::kSource;
  std::optional<Label> label;
};

struct DomainData {
  std::vector<Sample> source_train;
  std::vector<Sample> source_test;
  std::vector<Sample> target_adapt;
  std::vector<Sample> target_test;
};

// Front-end features as the given model consumes them: the BLSTM sees
// config.context stacked frames, the MLP single frames.
Matrix PrepareModelInput(const Utterance& utt, const FeatureConfig& config,
                         ModelKind kind);
int ModelInputDim(const FeatureConfig& config, ModelKind kind);

DomainData BuildDomainData(std::span<const LoadedUtterance> utterances,
                           const FeatureConfig& config, ModelKind kind);
// Same, from in-memory corpus entries (recorded audio).
DomainData BuildDomainData(const Corpus& corpus, const FeatureConfig& config,
                           ModelKind kind);

// Split file: a "[subset]" header line followed by one utterance id per
// line, for each of the four subsets.
struct DomainSplit {
  std::vector<std::string> source_train;
  std::vector<std::string> source_test;
  std::vector<std::string> target_adapt;
  std::vector<std::string> target_test;

  // Throws DataError if any id appears in more than one subset.
  void Validate() const;
};

DomainSplit SplitOf(const DomainData& data);
void WriteSplitFile(const std::string& path, const DomainSplit& split);
DomainSplit ReadSplitFile(const std::string& path);
// Reassigns subsets by id. Ids missing from the split are dropped.
DomainData ApplySplit(DomainData data, const DomainSplit& split);

// Guards pathology labels during training. Every read of a target-domain
// label is counted; reading a label that was erased throws.
class LabelAccess {
 public:
  int Read(const Sample& s);
  int64_t target_reads() const { return target_reads_; }
  int64_t source_reads() const { return source_reads_; }

 private:
  int64_t target_reads_ = 0;
  int64_t source_reads_ = 0;
};

// Copy of the samples with labels removed.
std::vector<Sample> EraseLabels(std::span<const Sample> samples);

}  // namespace davoc

#endif  // DAVOC_ADAPT_DATASET_H_
