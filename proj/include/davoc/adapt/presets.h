#ifndef DAVOC_ADAPT_PRESETS_H_
#define DAVOC_ADAPT_PRESETS_H_

#include <map>
#include <string>

#include "davoc/adapt/lambda_schedule.h"
#include "davoc/adapt/trainer.h"
#include "davoc/synth/corpus.h"

namespace davoc {

// Corpus size, network widths, epoch counts and lambda for one compute budget.
//   paper: 512-unit networks, full-size corpus
//   desk:  full-size corpus, 64-unit networks, one CPU core, lambda 0.3
//   ci:    30-utterance corpus, tiny networks
struct ScalePreset {
  std::string name;
  CorpusSpec corpus;
  ModelConfig model;  // input_dim is filled in by MakeTrainConfig
  int epochs = 0;
  int frozen_epochs = 0;
  LambdaSchedule lambda;
};

ScalePreset GetScalePreset(const std::string& name);

TrainConfig MakeTrainConfig(const ScalePreset& preset, const FeatureConfig& features,
                            ModelKind kind);

// Applies a key/value config file on top of `config`. Keys:
//   regime, lambda, seed, epochs, learning_rate, device_lr_scale,
//   anneal_lr, batch_size, clip_norm,
//   features.kind, features.window_ms, features.normalized,
//   features.context, model.kind, model.dense_units, model.lstm_units,
//   model.lstm_layers, model.mlp_units, model.mlp_layers,
//   model.device_units, model.device_layers
// Unknown keys are a ConfigError. model.input_dim is recomputed.
void ApplyKeyValues(const std::map<std::string, std::string>& kv, TrainConfig& config);

// Rebuilds the feature configuration stored by TrainConfig::ToMetadata.
FeatureConfig FeatureConfigFromMetadata(const std::map<std::string, std::string>& meta);

}  // namespace davoc

#endif  // DAVOC_ADAPT_PRESETS_H_
