#include "davoc/adapt/presets.h"

#include <charconv>
#include <cmath>

#include "davoc/common/error.h"

namespace davoc {

ScalePreset GetScalePreset(const std::string& name) {
  ScalePreset p;
  p.name = name;
  if (name == "paper") {
    p.corpus = CorpusSpec::FullShape();
    p.model.dense_units = 512;
    p.model.lstm_units = 512;
    p.epochs = 100;
    p.frozen_epochs = 100;
  } else if (name == "desk") {
    p.corpus = CorpusSpec::FullShape();
    p.model.dense_units = 64;
    p.model.lstm_units = 64;
    p.epochs = 30;
    p.frozen_epochs = 100;
    p.lambda.lambda0 = 0.3;
  } else if (name == "ci") {
    p.corpus = CorpusSpec::CiScale();
    p.model.dense_units = 8;
    p.model.lstm_units = 8;
    p.model.mlp_units = 16;
    p.model.mlp_layers = 2;
    p.model.device_units = 16;
    p.model.device_layers = 2;
    p.epochs = 3;
    p.frozen_epochs = 3;
  } else {
    throw ConfigError("unknown scale '" + name + "' (paper, desk, ci)");
  }
  return p;
}

TrainConfig MakeTrainConfig(const ScalePreset& preset, const FeatureConfig& features,
                            ModelKind kind) {
  TrainConfig c;
  c.features = features;
  c.model = preset.model;
  c.model.kind = kind;
  c.model.input_dim = ModelInputDim(features, kind);
  c.epochs = preset.epochs;
  c.lambda = preset.lambda;
  return c;
}

namespace {

double ToDouble(const std::string& key, const std::string& v) {
  try {
    size_t used = 0;
    const double d = std::stod(v, &used);
    if (used == v.size()) return d;
  } catch (const std::exception&) {
  }
  throw ConfigError("'" + key + "' expects a number, got '" + v + "'");
}

int64_t ToInt(const std::string& key, const std::string& v) {
  int64_t out = 0;
  const auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
  if (ec != std::errc() || ptr != v.data() + v.size()) {
    throw ConfigError("'" + key + "' expects an integer, got '" + v + "'");
  }
  return out;
}

bool ToBool(const std::string& key, const std::string& v) {
  if (v == "1" || v == "true" || v == "yes") return true;
  if (v == "0" || v == "false" || v == "no") return false;
  throw ConfigError("'" + key + "' expects a boolean, got '" + v + "'");
}

}  // namespace

void ApplyKeyValues(const std::map<std::string, std::string>& kv, TrainConfig& c) {
  for (const auto& [key, v] : kv) {
    if (key == "regime") c.regime = ParseRegime(v);
    else if (key == "lambda") c.lambda = LambdaSchedule::Parse(v);
    else if (key == "seed") c.seed = static_cast<uint64_t>(ToInt(key, v));
    else if (key == "epochs") c.epochs = static_cast<int>(ToInt(key, v));
    else if (key == "learning_rate") c.learning_rate = ToDouble(key, v);
    else if (key == "batch_size") c.batch_size = static_cast<int>(ToInt(key, v));
    else if (key == "clip_norm") c.clip_norm = ToDouble(key, v);
    else if (key == "device_lr_scale") c.device_lr_scale = ToDouble(key, v);
    else if (key == "anneal_lr") c.anneal_lr = ToBool(key, v);
    else if (key == "features.kind") c.features.kind = ParseFeatureKind(v);
    else if (key == "features.window_ms") c.features.window_ms = ToDouble(key, v);
    else if (key == "features.normalized") c.features.normalized = ToBool(key, v);
    else if (key == "features.context") c.features.context = static_cast<int>(ToInt(key, v));
    else if (key == "model.kind") c.model.kind = ParseModelKind(v);
    else if (key == "model.dense_units") c.model.dense_units = static_cast<int>(ToInt(key, v));
    else if (key == "model.lstm_units") c.model.lstm_units = static_cast<int>(ToInt(key, v));
    else if (key == "model.lstm_layers") c.model.lstm_layers = static_cast<int>(ToInt(key, v));
    else if (key == "model.mlp_units") c.model.mlp_units = static_cast<int>(ToInt(key, v));
    else if (key == "model.mlp_layers") c.model.mlp_layers = static_cast<int>(ToInt(key, v));
    else if (key == "model.device_units") c.model.device_units = static_cast<int>(ToInt(key, v));
    else if (key == "model.device_layers") c.model.device_layers = static_cast<int>(ToInt(key, v));
    else throw ConfigError("unknown config key '" + key + "'");
  }
  c.model.input_dim = ModelInputDim(c.features, c.model.kind);
}

FeatureConfig FeatureConfigFromMetadata(const std::map<std::string, std::string>& meta) {
  auto get = [&](const std::string& key) -> const std::string& {
    auto it = meta.find(key);
    if (it == meta.end()) throw DataError("checkpoint lacks '" + key + "'");
    return it->second;
  };
  FeatureConfig f;
  f.kind = ParseFeatureKind(get("features.kind"));
  f.window_ms = ToDouble("features.window_ms", get("features.window_ms"));
  f.normalized = ToBool("features.normalized", get("features.normalized"));
  f.n_mel_filters = static_cast<int>(ToInt("features.n_mel_filters", get("features.n_mel_filters")));
  f.n_cepstra = static_cast<int>(ToInt("features.n_cepstra", get("features.n_cepstra")));
  f.pre_emphasis = ToDouble("features.pre_emphasis", get("features.pre_emphasis"));
  f.context = static_cast<int>(ToInt("features.context", get("features.context")));
  f.Validate();
  return f;
}

}  // namespace davoc
