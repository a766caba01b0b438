#include "davoc/models/gradcheck_suite.h"

#include <cmath>

#include "davoc/common/error.h"
#include "davoc/common/rng.h"
#include "davoc/models/model_graph.h"
#include "davoc/nn/layers.h"
#include "davoc/nn/lstm.h"

namespace davoc {

namespace {

using nn::Param;
using nn::ParamList;

Matrix RandomMatrix(int rows, int cols, Rng& rng, double scale = 1.0) {
  Matrix m(rows, cols);
  for (Eigen::Index i = 0; i < m.size(); ++i) m.data()[i] = scale * Gaussian(rng);
  return m;
}

// Nudges every entry so no parameter sits at an exact zero.
void Jitter(const ParamList& params, Rng& rng) {
  for (Param* p : params) {
    for (Eigen::Index i = 0; i < p->value.size(); ++i) {
      p->value.data()[i] += 0.1 * Gaussian(rng);
    }
  }
}

// Runs the check once over the parameters and once over the input.
template <typename Run>
ComponentCheck CheckLayer(const std::string& name, ParamList params, Param& input,
                          double eps, Run run) {
  ComponentCheck out;
  out.component = name;
  auto objective = [&](bool with_grad) {
    if (with_grad) {
      nn::ZeroGrads(params);
      input.grad.setZero();
    }
    return run(with_grad);
  };
  if (!params.empty()) out.result = nn::FiniteDifferenceCheck(params, objective, eps);
  const nn::GradCheckResult in = nn::FiniteDifferenceCheck({&input}, objective, eps);
  out.input_relative_error = in.max_relative_error;
  if (params.empty()) out.result = in;
  out.result.max_relative_error =
      std::max(out.result.max_relative_error, out.input_relative_error);
  return out;
}

double Readout(const Matrix& y, const Matrix& r) { return (y.array() * r.array()).sum(); }

ComponentCheck CheckStack(ModelKind kind, double eps, uint64_t seed) {
  ModelConfig cfg;
  cfg.kind = kind;
  cfg.input_dim = 5;
  cfg.dense_units = 4;
  cfg.lstm_units = 3;
  cfg.lstm_layers = 2;
  cfg.mlp_units = 4;
  cfg.mlp_layers = 2;
  cfg.device_units = 4;
  cfg.device_layers = 2;
  ModelGraph model(cfg);
  model.Initialize(seed);
  Rng rng = MakeRng(seed, 1);
  Jitter(model.AllParams(), rng);
  const Matrix x = RandomMatrix(6, cfg.input_dim, rng);
  // GRL in pass-through mode; the reversal has its own check.
  model.set_grl_identity(true);
  const LossWeights weights{1.0, 0.5};
  auto objective = [&](bool with_grad) {
    if (!with_grad) {
      const SampleLosses l = model.Evaluate(x, 1, 0);
      return *l.label_loss * weights.label + *l.device_loss * weights.device;
    }
    model.ZeroGrads();
    const SampleLosses l = model.Accumulate(x, 1, 0, 1.0, weights);
    return *l.label_loss * weights.label + *l.device_loss * weights.device;
  };
  ComponentCheck out;
  out.component = kind == ModelKind::kBlstm ? "blstm_stack" : "mlp_stack";
  out.result = nn::FiniteDifferenceCheck(model.AllParams(), objective, eps);
  return out;
}

}  // namespace

std::vector<std::string> GradCheckComponents() {
  return {"dense", "relu", "meanpool", "softmax_ce", "grl",
          "lstm",  "bilstm", "blstm_stack", "mlp_stack"};
}

ComponentCheck CheckComponent(const std::string& component, double eps,
                              uint64_t seed) {
  Rng rng = MakeRng(seed, 0);
  Param input("input", 5, 3);

  if (component == "dense") {
    nn::Dense layer("dense", 3, 4);
    layer.Init(rng);
    Jitter(layer.Params(), rng);
    input.value = RandomMatrix(5, 3, rng);
    const Matrix r = RandomMatrix(5, 4, rng);
    return CheckLayer(component, layer.Params(), input, eps, [&](bool g) {
      const Matrix y = layer.Forward(input.value);
      if (g) input.grad = layer.Backward(r);
      return Readout(y, r);
    });
  }
  if (component == "relu") {
    nn::Relu layer;
    input.value = RandomMatrix(5, 3, rng);
    // Keep inputs away from the kink.
    for (Eigen::Index i = 0; i < input.value.size(); ++i) {
      double& v = input.value.data()[i];
      v += v >= 0 ? 0.2 : -0.2;
    }
    const Matrix r = RandomMatrix(5, 3, rng);
    return CheckLayer(component, {}, input, eps, [&](bool g) {
      const Matrix y = layer.Forward(input.value);
      if (g) input.grad = layer.Backward(r);
      return Readout(y, r);
    });
  }
  if (component == "meanpool") {
    nn::MeanPoolTime layer;
    input.value = RandomMatrix(5, 3, rng);
    const Matrix r = RandomMatrix(1, 3, rng);
    return CheckLayer(component, {}, input, eps, [&](bool g) {
      const Matrix y = layer.Forward(input.value);
      if (g) input.grad = layer.Backward(r);
      return Readout(y, r);
    });
  }
  if (component == "softmax_ce") {
    Param logits("logits", 1, 3);
    logits.value = RandomMatrix(1, 3, rng, 2.0);
    return CheckLayer(component, {}, logits, eps, [&](bool g) {
      const nn::LossAndGrad l = nn::SoftmaxCrossEntropy(logits.value, 1);
      if (g) logits.grad = l.grad;
      return l.loss;
    });
  }
  if (component == "grl") {
    const double lambda = 0.7;
    nn::GradientReversal grl(lambda);
    input.value = RandomMatrix(5, 3, rng);
    const Matrix r = RandomMatrix(5, 3, rng);
    const Matrix y = grl.Forward(input.value);
    // Pass-through mode must be the exact gradient of the read-out.
    grl.set_identity(true);
    ComponentCheck out = CheckLayer(component, {}, input, eps, [&](bool g) {
      const Matrix fwd = grl.Forward(input.value);
      if (g) input.grad = grl.Backward(r);
      return Readout(fwd, r);
    });
    out.forward_deviation = (y - input.value).cwiseAbs().maxCoeff();
    // Reversed mode must be exactly -lambda times that gradient.
    grl.set_identity(false);
    const Matrix reversed = grl.Backward(r);
    double worst = 0.0;
    for (Eigen::Index i = 0; i < r.size(); ++i) {
      worst = std::max(worst, nn::RelativeError(reversed.data()[i],
                                                -lambda * r.data()[i]));
    }
    out.result.max_relative_error = std::max(out.result.max_relative_error, worst);
    return out;
  }
  if (component == "lstm" || component == "bilstm") {
    const bool bi = component == "bilstm";
    nn::Lstm uni("lstm", 3, 4, false);
    nn::BiLstm both("bilstm", 3, 4);
    if (bi) both.Init(rng); else uni.Init(rng);
    const ParamList params = bi ? both.Params() : uni.Params();
    Jitter(params, rng);
    input.value = RandomMatrix(5, 3, rng);
    const Matrix r = RandomMatrix(5, bi ? 8 : 4, rng);
    return CheckLayer(component, params, input, eps, [&](bool g) {
      const Matrix y = bi ? both.Forward(input.value) : uni.Forward(input.value);
      if (g) input.grad = bi ? both.Backward(r) : uni.Backward(r);
      return Readout(y, r);
    });
  }
  if (component == "blstm_stack") return CheckStack(ModelKind::kBlstm, eps, seed);
  if (component == "mlp_stack") return CheckStack(ModelKind::kMlp, eps, seed);
  throw ConfigError("unknown gradcheck component '" + component + "'");
}

}  // namespace davoc
