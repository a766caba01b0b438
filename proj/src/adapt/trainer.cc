#include "davoc/adapt/trainer.h"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <numeric>
#include <optional>
#include <sstream>

#include "davoc/common/error.h"
#include "davoc/common/rng.h"
#include "davoc/eval/pr_curve.h"
#include "davoc/nn/adam.h"

namespace davoc {

std::string RegimeName(Regime r) {
  switch (r) {
    case Regime::kSourceOnly: return "source-only";
    case Regime::kTargetOnly: return "target-only";
    case Regime::kFrozenFineTune: return "frozen-finetune";
    case Regime::kDatSupervised: return "dat-sup";
    case Regime::kDatUnsupervised: return "dat-unsup";
  }
  return "";
}

Regime ParseRegime(const std::string& s) {
  for (Regime r : {Regime::kSourceOnly, Regime::kTargetOnly,
                   Regime::kFrozenFineTune, Regime::kDatSupervised,
                   Regime::kDatUnsupervised}) {
    if (s == RegimeName(r)) return r;
  }
  throw ConfigError("unknown regime '" + s + "'");
}

void TrainConfig::Validate() const {
  if (epochs < 0 || (epochs == 0 && regime != Regime::kFrozenFineTune)) {
    throw ConfigError("epochs must be >= 1");
  }
  if (batch_size < 1) throw ConfigError("batch size must be >= 1");
  if (!(learning_rate > 0.0)) throw ConfigError("learning rate must be > 0");
  if (!(clip_norm > 0.0)) throw ConfigError("clip norm must be > 0");
  if (!(device_lr_scale > 0.0)) throw ConfigError("device lr scale must be > 0");
  if (!(lambda.lambda0 >= 0.0)) throw ConfigError("lambda must be >= 0");
  model.Validate();
  features.Validate();
}

std::map<std::string, std::string> TrainConfig::ToMetadata() const {
  auto num = [](double v) {
    std::ostringstream s;
    s.precision(17);
    s << v;
    return s.str();
  };
  return {
      {"train.regime", RegimeName(regime)},
      {"train.lambda", lambda.ToString()},
      {"train.learning_rate", num(learning_rate)},
      {"train.epochs", std::to_string(epochs)},
      {"train.batch_size", std::to_string(batch_size)},
      {"train.seed", std::to_string(seed)},
      {"train.clip_norm", num(clip_norm)},
      {"train.device_lr_scale", num(device_lr_scale)},
      {"train.anneal_lr", anneal_lr ? "1" : "0"},
      {"features.kind", FeatureKindName(features.kind)},
      {"features.window_ms", num(features.window_ms)},
      {"features.normalized", features.normalized ? "1" : "0"},
      {"features.n_mel_filters", std::to_string(features.n_mel_filters)},
      {"features.n_cepstra", std::to_string(features.n_cepstra)},
      {"features.pre_emphasis", num(features.pre_emphasis)},
      {"features.context", std::to_string(features.context)},
  };
}

namespace {

double AnnealFactor(double progress) {
  return std::pow(1.0 + 10.0 * progress, -0.75);
}

int DeviceIndex(const Sample& s) { return s.device == Device::kTarget ? 1 : 0; }

void CheckFinite(const SampleLosses& l, const Sample& s) {
  if ((l.label_loss && !std::isfinite(*l.label_loss)) ||
      (l.device_loss && !std::isfinite(*l.device_loss)) ||
      !std::isfinite(l.score)) {
    throw NumericError("non-finite loss on utterance '" + s.id + "'");
  }
}

double SafePrAuc(const std::vector<double>& scores, const std::vector<int>& labels) {
  const bool has_positive =
      std::find(labels.begin(), labels.end(), 1) != labels.end();
  return has_positive ? PrAuc(scores, labels)
                      : std::numeric_limits<double>::quiet_NaN();
}

// Shared loop for the source-only, target-only and adversarial regimes.
// `secondary` is the target pool for adversarial training (empty otherwise).
TrainResult RunLoop(const TrainConfig& config, std::span<const Sample> primary,
                    std::span<const Sample> secondary, bool adversarial,
                    bool secondary_labels, LabelAccess& access) {
  config.Validate();
  if (primary.empty()) throw DataError("training set is empty");
  if (adversarial && secondary.empty()) {
    throw DataError("adversarial training needs target utterances");
  }
  TrainResult result{ModelGraph(config.model), {}, 0};
  ModelGraph& model = result.model;
  model.Initialize(config.seed);
  std::vector<const Matrix*> inputs;
  for (const Sample& s : primary) inputs.push_back(&s.features);
  model.FitInputStandardization(inputs);

  const nn::ParamList detector = model.DetectorParams();
  const nn::ParamList device = model.DeviceParams();
  const nn::AdamOptions adam{config.learning_rate};
  nn::Adam detector_opt(detector, adam);
  std::optional<nn::Adam> device_opt;
  if (adversarial) {
    nn::AdamOptions device_adam = adam;
    device_adam.learning_rate *= config.device_lr_scale;
    device_opt.emplace(device, device_adam);
  }

  Rng shuffle_rng = MakeRng(config.seed, 3);
  Rng target_rng = MakeRng(config.seed, 4);

  std::vector<size_t> order(primary.size());
  std::iota(order.begin(), order.end(), 0);
  const size_t batch = static_cast<size_t>(config.batch_size);
  const size_t batches = (primary.size() + batch - 1) / batch;
  const double total_steps = static_cast<double>(batches) * config.epochs;
  int64_t step = 0;

  for (int epoch = 1; epoch <= config.epochs; ++epoch) {
    Shuffle(order, shuffle_rng);
    double label_sum = 0.0, device_sum = 0.0, lambda = 0.0;
    int label_count = 0, device_count = 0;
    std::vector<double> scores;
    std::vector<int> labels;

    for (size_t b = 0; b < batches; ++b) {
      const size_t begin = b * batch;
      const size_t end = std::min(begin + batch, primary.size());
      lambda = adversarial ? config.lambda.At(static_cast<double>(step) / total_steps)
                           : 0.0;

      std::vector<const Sample*> drawn;
      if (adversarial) {
        for (size_t i = begin; i < end; ++i) {
          drawn.push_back(&secondary[UniformIndex(target_rng, secondary.size())]);
        }
      }
      const size_t n_labeled = (end - begin) + (secondary_labels ? drawn.size() : 0);
      const size_t n_device = adversarial ? (end - begin) + drawn.size() : 0;
      LossWeights weights;
      weights.label = 1.0 / static_cast<double>(n_labeled);
      weights.device = n_device ? 1.0 / static_cast<double>(n_device) : 0.0;

      const double progress = static_cast<double>(step) / total_steps;
      const double decay = config.anneal_lr ? AnnealFactor(progress) : 1.0;
      detector_opt.set_learning_rate(config.learning_rate * decay);
      if (device_opt) {
        device_opt->set_learning_rate(config.learning_rate *
                                      config.device_lr_scale * decay);
      }

      model.ZeroGrads();
      for (size_t i = begin; i < end; ++i) {
        const Sample& s = primary[order[i]];
        const int y = access.Read(s);
        const std::optional<int> d =
            adversarial ? std::optional<int>(DeviceIndex(s)) : std::nullopt;
        const SampleLosses l = model.Accumulate(s.features, y, d, lambda, weights);
        CheckFinite(l, s);
        label_sum += *l.label_loss;
        ++label_count;
        if (l.device_loss) {
          device_sum += *l.device_loss;
          ++device_count;
        }
        scores.push_back(l.score);
        labels.push_back(y);
      }
      for (const Sample* t : drawn) {
        std::optional<int> y;
        if (secondary_labels) y = access.Read(*t);
        const SampleLosses l =
            model.Accumulate(t->features, y, DeviceIndex(*t), lambda, weights);
        CheckFinite(l, *t);
        if (l.label_loss) {
          label_sum += *l.label_loss;
          ++label_count;
          scores.push_back(l.score);
          labels.push_back(*y);
        }
        device_sum += *l.device_loss;
        ++device_count;
      }

      nn::ClipGradNorm(detector, config.clip_norm);
      detector_opt.Step();
      if (device_opt) {
        nn::ClipGradNorm(device, config.clip_norm);
        device_opt->Step();
      }
      ++step;
    }

    EpochLog log;
    log.epoch = epoch;
    log.label_loss = label_sum / label_count;
    log.device_loss = device_count ? device_sum / device_count
                                   : std::numeric_limits<double>::quiet_NaN();
    log.lambda = lambda;
    log.train_pr_auc = SafePrAuc(scores, labels);
    result.log.push_back(log);
  }
  model.ZeroGrads();
  result.target_label_reads = access.target_reads();
  return result;
}

void RequireBothClasses(std::span<const Sample> samples, LabelAccess& access,
                        const char* what) {
  bool seen[2] = {false, false};
  for (const Sample& s : samples) seen[access.Read(s)] = true;
  if (!seen[0] || !seen[1]) {
    throw DataError(std::string(what) + " must contain both classes");
  }
}

}  // namespace

TrainResult TrainSourceOnly(const TrainConfig& config,
                            std::span<const Sample> source_train) {
  LabelAccess access;
  return RunLoop(config, source_train, {}, false, false, access);
}

TrainResult TrainTargetOnly(const TrainConfig& config,
                            std::span<const Sample> target_adapt) {
  if (target_adapt.empty()) throw DataError("target_adapt is empty");
  LabelAccess access;
  RequireBothClasses(target_adapt, access, "target_adapt");
  return RunLoop(config, target_adapt, {}, false, false, access);
}

TrainResult TrainFrozenFineTune(const TrainConfig& config,
                                const ModelGraph& pretrained,
                                std::span<const Sample> target_adapt) {
  config.Validate();
  if (target_adapt.empty()) throw DataError("target_adapt is empty");
  if (!(pretrained.config() == config.model)) {
    throw ConfigError("pretrained model does not match the configured architecture");
  }
  LabelAccess access;
  RequireBothClasses(target_adapt, access, "target_adapt");

  TrainResult result{pretrained, {}, 0};
  ModelGraph& model = result.model;
  // Frozen encoder: hidden states computed once.
  std::vector<Matrix> hidden;
  for (const Sample& s : target_adapt) hidden.push_back(model.EncodeHidden(s.features));

  const nn::ParamList predictor = model.PredictorParams();
  nn::Adam opt(predictor, nn::AdamOptions{config.learning_rate});
  Rng shuffle_rng = MakeRng(config.seed, 5);
  std::vector<size_t> order(target_adapt.size());
  std::iota(order.begin(), order.end(), 0);
  const size_t batch = static_cast<size_t>(config.batch_size);

  for (int epoch = 1; epoch <= config.epochs; ++epoch) {
    Shuffle(order, shuffle_rng);
    double loss_sum = 0.0;
    std::vector<double> scores;
    std::vector<int> labels;
    for (size_t begin = 0; begin < order.size(); begin += batch) {
      const size_t end = std::min(begin + batch, order.size());
      nn::ZeroGrads(predictor);
      for (size_t i = begin; i < end; ++i) {
        const Sample& s = target_adapt[order[i]];
        const int y = access.Read(s);
        const SampleLosses l = model.AccumulatePredictor(
            hidden[order[i]], y, 1.0 / static_cast<double>(end - begin));
        CheckFinite(l, s);
        loss_sum += *l.label_loss;
        scores.push_back(l.score);
        labels.push_back(y);
      }
      nn::ClipGradNorm(predictor, config.clip_norm);
      opt.Step();
    }
    EpochLog log;
    log.epoch = epoch;
    log.label_loss = loss_sum / static_cast<double>(order.size());
    log.device_loss = std::numeric_limits<double>::quiet_NaN();
    log.lambda = 0.0;
    log.train_pr_auc = SafePrAuc(scores, labels);
    result.log.push_back(log);
  }
  model.ZeroGrads();
  result.target_label_reads = access.target_reads();
  return result;
}

TrainResult TrainDat(const TrainConfig& config,
                     std::span<const Sample> source_train,
                     std::span<const Sample> target_adapt) {
  if (config.regime != Regime::kDatSupervised &&
      config.regime != Regime::kDatUnsupervised) {
    throw ConfigError("TrainDat needs an adversarial regime");
  }
  if (target_adapt.empty()) throw DataError("target_adapt is empty");
  for (const Sample& s : target_adapt) {
    if (s.device != Device::kTarget) {
      throw DataError("target_adapt contains non-target utterance '" + s.id + "'");
    }
  }
  LabelAccess access;
  if (config.regime == Regime::kDatSupervised) {
    return RunLoop(config, source_train, target_adapt, true, true, access);
  }
  const std::vector<Sample> unlabeled = EraseLabels(target_adapt);
  return RunLoop(config, source_train, unlabeled, true, false, access);
}

TrainResult Train(const TrainConfig& config, const DomainData& data,
                  const ModelGraph* pretrained) {
  switch (config.regime) {
    case Regime::kSourceOnly:
      return TrainSourceOnly(config, data.source_train);
    case Regime::kTargetOnly:
      return TrainTargetOnly(config, data.target_adapt);
    case Regime::kFrozenFineTune:
      if (pretrained == nullptr) {
        throw ConfigError("frozen fine-tuning needs a pretrained source model");
      }
      return TrainFrozenFineTune(config, *pretrained, data.target_adapt);
    case Regime::kDatSupervised:
    case Regime::kDatUnsupervised:
      return TrainDat(config, data.source_train, data.target_adapt);
  }
  throw ConfigError("unhandled regime");
}

void WriteMetricsCsv(const std::string& path, const std::vector<EpochLog>& log) {
  std::ofstream out(path);
  if (!out) throw DataError("cannot write " + path);
  out.precision(10);
  out << "epoch,label_loss,device_loss,lambda,train_pr_auc\n";
  for (const EpochLog& e : log) {
    out << e.epoch << ',' << e.label_loss << ',' << e.device_loss << ','
        << e.lambda << ',' << e.train_pr_auc << '\n';
  }
}

std::vector<double> ScoreSamples(ModelGraph& model,
                                 std::span<const Sample> samples) {
  std::vector<double> scores;
  scores.reserve(samples.size());
  for (const Sample& s : samples) scores.push_back(model.Score(s.features));
  return scores;
}

double EvaluatePrAuc(ModelGraph& model, std::span<const Sample> samples) {
  std::vector<int> labels;
  for (const Sample& s : samples) {
    if (!s.label) throw DataError("evaluation sample '" + s.id + "' has no label");
    labels.push_back(*s.label == Label::kPathological ? 1 : 0);
  }
  return PrAuc(ScoreSamples(model, samples), labels);
}

}  // namespace davoc
