#ifndef DAVOC_ADAPT_TRAINER_H_
#define DAVOC_ADAPT_TRAINER_H_

#include <cstdint>
#include <map>
#include <span>
#include <string>
#include <vector>

#include "davoc/adapt/dataset.h"
#include "davoc/adapt/lambda_schedule.h"
#include "davoc/dsp/features.h"
#include "davoc/models/model_graph.h"

namespace davoc {

enum class Regime {
  kSourceOnly,       // baseline 1: no adaptation
  kTargetOnly,       // baseline 2: small labeled target set only
  kFrozenFineTune,   // baseline 3: source encoder frozen, predictor re-fit
  kDatSupervised,    // adversarial, target labels used
  kDatUnsupervised,  // adversarial, target labels never read
};

std::string RegimeName(Regime r);
Regime ParseRegime(const std::string& s);

struct TrainConfig {
  Regime regime = Regime::kSourceOnly;
  LambdaSchedule lambda;
  double learning_rate = 1e-3;
  // Device-classifier learning rate as a multiple of learning_rate.
  double device_lr_scale = 1.0;
  // When set, the rate at training progress p is lr / (1 + 10 p)^0.75.
  bool anneal_lr = false;
  int epochs = 100;  // for kFrozenFineTune: fine-tuning epochs (0 allowed)
  // Labeled utterances per batch. Adversarial batches draw the same number
  // of target utterances on top, so they are half source, half target.
  int batch_size = 8;
  uint64_t seed = 1;
  double clip_norm = 5.0;
  ModelConfig model;
  FeatureConfig features;

  void Validate() const;
  // Flat key/value view of every field, written into checkpoints and echoed
  // by the CLI.
  std::map<std::string, std::string> ToMetadata() const;
};

struct EpochLog {
  int epoch = 0;
  double label_loss = 0.0;   // mean over labeled utterances seen
  double device_loss = 0.0;  // NaN when no device loss was computed
  double lambda = 0.0;       // value used for the epoch's last batch
  double train_pr_auc = 0.0; // on the labeled utterances, from in-epoch scores
};

struct TrainResult {
  ModelGraph model;
  std::vector<EpochLog> log;
  int64_t target_label_reads = 0;
};

// Minimizes the label loss on labeled source utterances. The device head
// keeps its initial weights.
TrainResult TrainSourceOnly(const TrainConfig& config,
                            std::span<const Sample> source_train);

// Label loss on the labeled target pool only. Both classes must be present.
TrainResult TrainTargetOnly(const TrainConfig& config,
                            std::span<const Sample> target_adapt);

// Copies `pretrained`, freezes its encoder and re-fits only the label
// predictor on the labeled target pool.
TrainResult TrainFrozenFineTune(const TrainConfig& config,
                                const ModelGraph& pretrained,
                                std::span<const Sample> target_adapt);

// Domain-adversarial training. Each batch takes batch_size source utterances
// (shuffled, without replacement within an epoch) and batch_size target
// utterances (with replacement). The label loss covers the source half, plus
// the target half for kDatSupervised; the device loss covers both halves.
// The encoder receives dL_y - lambda * dL_d through the GRL; the device
// head descends L_d. For kDatUnsupervised the target labels are erased
// before training starts and the returned read counter stays at zero.
TrainResult TrainDat(const TrainConfig& config,
                     std::span<const Sample> source_train,
                     std::span<const Sample> target_adapt);

// Dispatches on config.regime. `pretrained` is required for
// kFrozenFineTune and ignored otherwise.
TrainResult Train(const TrainConfig& config, const DomainData& data,
                  const ModelGraph* pretrained = nullptr);

// CSV columns: epoch,label_loss,device_loss,lambda,train_pr_auc
void WriteMetricsCsv(const std::string& path, const std::vector<EpochLog>& log);

// Pathology scores for each sample, in order.
std::vector<double> ScoreSamples(ModelGraph& model,
                                 std::span<const Sample> samples);
// PR-AUC with pathological as the positive class.
double EvaluatePrAuc(ModelGraph& model, std::span<const Sample> samples);

}  // namespace davoc

#endif  // DAVOC_ADAPT_TRAINER_H_
