#include "davoc/models/model_graph.h"

#include <algorithm>
#include <cmath>

#include "davoc/common/error.h"
#include "davoc/common/rng.h"

namespace davoc {

std::string ModelKindName(ModelKind kind) {
  return kind == ModelKind::kBlstm ? "blstm" : "mlp";
}

ModelKind ParseModelKind(const std::string& s) {
  if (s == "blstm") return ModelKind::kBlstm;
  if (s == "mlp") return ModelKind::kMlp;
  throw ConfigError("unknown model kind '" + s + "'");
}

int ModelConfig::EmbeddingDim() const {
  return kind == ModelKind::kBlstm ? 2 * lstm_units : mlp_units;
}

void ModelConfig::Validate() const {
  if (input_dim < 1 || dense_units < 1 || lstm_units < 1 || lstm_layers < 1 ||
      mlp_units < 1 || mlp_layers < 1 || device_units < 1 ||
      device_layers < 0 || num_classes < 2 || num_devices < 2) {
    throw ConfigError("model dimensions must be positive");
  }
}

ModelConfig ModelConfig::FullScale(ModelKind kind, int input_dim) {
  ModelConfig c;
  c.kind = kind;
  c.input_dim = input_dim;
  c.dense_units = 512;
  c.lstm_units = 512;
  c.lstm_layers = 2;
  c.mlp_units = 300;
  c.mlp_layers = 3;
  c.device_units = 300;
  c.device_layers = 3;
  return c;
}

double MeanPositivePosterior(const Matrix& logits) {
  double sum = 0.0;
  for (Eigen::Index r = 0; r < logits.rows(); ++r) {
    sum += nn::Softmax(logits.row(r))[1];
  }
  return sum / static_cast<double>(logits.rows());
}

ModelGraph::ModelGraph(const ModelConfig& config)
    : config_(config),
      input_mean_("input.mean", 1, std::max(config.input_dim, 1)),
      input_scale_("input.scale", 1, std::max(config.input_dim, 1)) {
  config_.Validate();
  input_scale_.value.setOnes();
  const int emb = config_.EmbeddingDim();
  if (config_.kind == ModelKind::kBlstm) {
    input_dense_ =
        nn::Dense("encoder.input_dense", config_.input_dim, config_.dense_units);
    int in = config_.dense_units;
    for (int l = 0; l < config_.lstm_layers; ++l) {
      lstm_layers_.emplace_back("encoder.blstm" + std::to_string(l), in,
                                config_.lstm_units);
      in = 2 * config_.lstm_units;
    }
  } else {
    int in = config_.input_dim;
    for (int l = 0; l < config_.mlp_layers; ++l) {
      mlp_dense_.emplace_back("encoder.dense" + std::to_string(l), in,
                              config_.mlp_units);
      mlp_relu_.emplace_back();
      in = config_.mlp_units;
    }
  }
  predictor_ = nn::Dense("predictor", emb, config_.num_classes);
  int in = emb;
  for (int l = 0; l < config_.device_layers; ++l) {
    device_dense_.emplace_back("device.dense" + std::to_string(l), in,
                               config_.device_units);
    device_relu_.emplace_back();
    in = config_.device_units;
  }
  device_out_ = nn::Dense("device.out", in, config_.num_devices);
}

void ModelGraph::Initialize(uint64_t seed) {
  Rng detector_rng = MakeRng(seed, 101);
  if (config_.kind == ModelKind::kBlstm) {
    input_dense_.Init(detector_rng);
    for (nn::BiLstm& l : lstm_layers_) l.Init(detector_rng);
  } else {
    for (nn::Dense& d : mlp_dense_) d.Init(detector_rng);
  }
  predictor_.Init(detector_rng);

  Rng device_rng = MakeRng(seed, 202);
  for (nn::Dense& d : device_dense_) d.Init(device_rng);
  device_out_.Init(device_rng);
  ZeroGrads();
}

Matrix ModelGraph::RunEncoder(const Matrix& features) {
  if (features.rows() == 0) throw DataError("empty feature matrix");
  if (features.cols() != config_.input_dim) {
    throw ConfigError("model expects " + std::to_string(config_.input_dim) +
                      "-dim input, got " + std::to_string(features.cols()));
  }
  const Matrix x =
      (features.rowwise() - input_mean_.value.row(0)).array().rowwise() *
      input_scale_.value.row(0).array();
  if (config_.kind == ModelKind::kBlstm) {
    Matrix h = input_relu_.Forward(input_dense_.Forward(x));
    for (nn::BiLstm& l : lstm_layers_) h = l.Forward(h);
    return pool_.Forward(h);
  }
  Matrix h = x;
  for (size_t l = 0; l < mlp_dense_.size(); ++l) {
    h = mlp_relu_[l].Forward(mlp_dense_[l].Forward(h));
  }
  return h;
}

void ModelGraph::BackwardEncoder(const Matrix& grad_hidden) {
  if (config_.kind == ModelKind::kBlstm) {
    Matrix g = pool_.Backward(grad_hidden);
    for (auto it = lstm_layers_.rbegin(); it != lstm_layers_.rend(); ++it) {
      g = it->Backward(g);
    }
    input_dense_.Backward(input_relu_.Backward(g));
    return;
  }
  Matrix g = grad_hidden;
  for (size_t l = mlp_dense_.size(); l-- > 0;) {
    g = mlp_dense_[l].Backward(mlp_relu_[l].Backward(g));
  }
}

ModelGraph::Forward ModelGraph::RunEncoderAndPredictor(
    const Matrix& features) {
  Forward f;
  f.hidden = RunEncoder(features);
  f.label_logits = predictor_.Forward(f.hidden);
  f.z = f.hidden.colwise().mean();
  return f;
}

RowVector ModelGraph::RunDeviceHead(const RowVector& z) {
  if (z.size() != config_.EmbeddingDim()) {
    throw ConfigError("device classifier expects a " +
                      std::to_string(config_.EmbeddingDim()) +
                      "-dim embedding");
  }
  Matrix h = grl_.Forward(z);
  for (size_t l = 0; l < device_dense_.size(); ++l) {
    h = device_relu_[l].Forward(device_dense_[l].Forward(h));
  }
  return device_out_.Forward(h);
}

Matrix ModelGraph::BackwardDeviceHead(const RowVector& grad_logits) {
  Matrix g = device_out_.Backward(grad_logits);
  for (size_t l = device_dense_.size(); l-- > 0;) {
    g = device_dense_[l].Backward(device_relu_[l].Backward(g));
  }
  return grl_.Backward(g);
}

Matrix ModelGraph::EncodeHidden(const Matrix& features) {
  return RunEncoder(features);
}

RowVector ModelGraph::Embed(const Matrix& features) {
  return RunEncoder(features).colwise().mean();
}

double ModelGraph::Score(const Matrix& features) {
  return ScoreFromHidden(RunEncoder(features));
}

double ModelGraph::ScoreFromHidden(const Matrix& hidden) {
  return MeanPositivePosterior(predictor_.Forward(hidden));
}

RowVector ModelGraph::DevicePosterior(const Matrix& features) {
  return nn::Softmax(RunDeviceHead(Embed(features)));
}

SampleLosses ModelGraph::Accumulate(const Matrix& features,
                                    std::optional<int> label,
                                    std::optional<int> device, double lambda,
                                    const LossWeights& weights,
                                    bool train_encoder) {
  grl_.set_lambda(lambda);
  const Forward f = RunEncoderAndPredictor(features);
  const auto rows = static_cast<double>(f.hidden.rows());
  SampleLosses out;
  out.score = MeanPositivePosterior(f.label_logits);

  Matrix grad_hidden = Matrix::Zero(f.hidden.rows(), f.hidden.cols());
  if (label) {
    Matrix grad_logits(f.label_logits.rows(), f.label_logits.cols());
    double loss = 0.0;
    for (Eigen::Index r = 0; r < f.label_logits.rows(); ++r) {
      const nn::LossAndGrad lg =
          nn::SoftmaxCrossEntropy(f.label_logits.row(r), *label);
      loss += lg.loss;
      grad_logits.row(r) = lg.grad * (weights.label / rows);
    }
    out.label_loss = loss / rows;
    grad_hidden += predictor_.Backward(grad_logits);
  }
  if (device) {
    const nn::LossAndGrad lg =
        nn::SoftmaxCrossEntropy(RunDeviceHead(f.z), *device);
    out.device_loss = lg.loss;
    const Matrix grad_z = BackwardDeviceHead(lg.grad * weights.device);
    grad_hidden += grad_z.replicate(f.hidden.rows(), 1) / rows;
  }
  if (train_encoder) BackwardEncoder(grad_hidden);
  return out;
}

SampleLosses ModelGraph::AccumulatePredictor(const Matrix& hidden, int label,
                                             double weight) {
  const Matrix logits = predictor_.Forward(hidden);
  const auto rows = static_cast<double>(hidden.rows());
  Matrix grad_logits(logits.rows(), logits.cols());
  double loss = 0.0;
  for (Eigen::Index r = 0; r < logits.rows(); ++r) {
    const nn::LossAndGrad lg = nn::SoftmaxCrossEntropy(logits.row(r), label);
    loss += lg.loss;
    grad_logits.row(r) = lg.grad * (weight / rows);
  }
  predictor_.Backward(grad_logits);
  SampleLosses out;
  out.label_loss = loss / rows;
  out.score = MeanPositivePosterior(logits);
  return out;
}

SampleLosses ModelGraph::Evaluate(const Matrix& features,
                                  std::optional<int> label,
                                  std::optional<int> device) {
  const Forward f = RunEncoderAndPredictor(features);
  SampleLosses out;
  out.score = MeanPositivePosterior(f.label_logits);
  if (label) {
    double loss = 0.0;
    for (Eigen::Index r = 0; r < f.label_logits.rows(); ++r) {
      loss += nn::SoftmaxCrossEntropy(f.label_logits.row(r), *label).loss;
    }
    out.label_loss = loss / static_cast<double>(f.label_logits.rows());
  }
  if (device) {
    out.device_loss =
        nn::SoftmaxCrossEntropy(RunDeviceHead(f.z), *device).loss;
  }
  return out;
}

nn::ParamList ModelGraph::EncoderParams() {
  nn::ParamList p;
  if (config_.kind == ModelKind::kBlstm) {
    p = input_dense_.Params();
    for (nn::BiLstm& l : lstm_layers_) {
      for (nn::Param* q : l.Params()) p.push_back(q);
    }
  } else {
    for (nn::Dense& d : mlp_dense_) {
      for (nn::Param* q : d.Params()) p.push_back(q);
    }
  }
  return p;
}

nn::ParamList ModelGraph::PredictorParams() { return predictor_.Params(); }

nn::ParamList ModelGraph::DetectorParams() {
  nn::ParamList p = EncoderParams();
  for (nn::Param* q : PredictorParams()) p.push_back(q);
  return p;
}

nn::ParamList ModelGraph::DeviceParams() {
  nn::ParamList p;
  for (nn::Dense& d : device_dense_) {
    for (nn::Param* q : d.Params()) p.push_back(q);
  }
  for (nn::Param* q : device_out_.Params()) p.push_back(q);
  return p;
}

nn::ParamList ModelGraph::AllParams() {
  nn::ParamList p = DetectorParams();
  for (nn::Param* q : DeviceParams()) p.push_back(q);
  return p;
}

nn::ParamList ModelGraph::StateParams() {
  nn::ParamList p = AllParams();
  p.push_back(&input_mean_);
  p.push_back(&input_scale_);
  return p;
}

void ModelGraph::SetInputStandardization(const RowVector& mean,
                                         const RowVector& stddev) {
  if (mean.size() != config_.input_dim || stddev.size() != config_.input_dim) {
    throw ConfigError("standardization width does not match the model input");
  }
  input_mean_.value = mean;
  for (Eigen::Index j = 0; j < stddev.size(); ++j) {
    if (!std::isfinite(mean[j]) || !std::isfinite(stddev[j]) || stddev[j] < 0) {
      throw NumericError("invalid input standardization");
    }
    input_scale_.value(0, j) = stddev[j] < 1e-8 ? 1.0 : 1.0 / stddev[j];
  }
}

void ModelGraph::FitInputStandardization(const std::vector<const Matrix*>& inputs) {
  RowVector sum = RowVector::Zero(config_.input_dim);
  RowVector sum_sq = RowVector::Zero(config_.input_dim);
  double rows = 0.0;
  for (const Matrix* m : inputs) {
    if (m->cols() != config_.input_dim) {
      throw ConfigError("standardization input has the wrong width");
    }
    sum += m->colwise().sum();
    rows += static_cast<double>(m->rows());
  }
  if (rows < 1.0) throw DataError("no frames to standardize with");
  const RowVector mean = sum / rows;
  for (const Matrix* m : inputs) {
    sum_sq += (m->rowwise() - mean).array().square().matrix().colwise().sum();
  }
  SetInputStandardization(mean, (sum_sq / rows).array().sqrt().matrix());
}

void ModelGraph::ZeroGrads() { nn::ZeroGrads(AllParams()); }

nn::Checkpoint ModelGraph::ToCheckpoint(
    const std::map<std::string, std::string>& extra) {
  nn::Checkpoint ckpt;
  ckpt.metadata = extra;
  auto put = [&](const char* key, int v) {
    ckpt.metadata[std::string("model.") + key] = std::to_string(v);
  };
  ckpt.metadata["model.kind"] = ModelKindName(config_.kind);
  put("input_dim", config_.input_dim);
  put("dense_units", config_.dense_units);
  put("lstm_units", config_.lstm_units);
  put("lstm_layers", config_.lstm_layers);
  put("mlp_units", config_.mlp_units);
  put("mlp_layers", config_.mlp_layers);
  put("device_units", config_.device_units);
  put("device_layers", config_.device_layers);
  put("num_classes", config_.num_classes);
  put("num_devices", config_.num_devices);
  ckpt.tensors = nn::ExportParams(StateParams());
  return ckpt;
}

ModelGraph ModelGraph::FromCheckpoint(const nn::Checkpoint& ckpt) {
  auto get = [&](const char* key) {
    const std::string& v = ckpt.Meta(std::string("model.") + key);
    try {
      return std::stoi(v);
    } catch (const std::exception&) {
      throw DataError(std::string("bad checkpoint value for model.") + key);
    }
  };
  ModelConfig c;
  c.kind = ParseModelKind(ckpt.Meta("model.kind"));
  c.input_dim = get("input_dim");
  c.dense_units = get("dense_units");
  c.lstm_units = get("lstm_units");
  c.lstm_layers = get("lstm_layers");
  c.mlp_units = get("mlp_units");
  c.mlp_layers = get("mlp_layers");
  c.device_units = get("device_units");
  c.device_layers = get("device_layers");
  c.num_classes = get("num_classes");
  c.num_devices = get("num_devices");
  ModelGraph model(c);
  nn::ImportParams(ckpt.tensors, model.StateParams());
  return model;
}

}  // namespace davoc
