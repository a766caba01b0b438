#include "davoc/nn/layers.h"

#include <cmath>

#include "davoc/common/error.h"

namespace davoc::nn {

Dense::Dense(const std::string& name, int in_dim, int out_dim)
    : weight_(name + ".weight", out_dim, in_dim),
      bias_(name + ".bias", 1, out_dim) {
  if (in_dim < 1 || out_dim < 1) {
    throw ConfigError("dense layer " + name + " needs positive dims");
  }
}

void Dense::Init(Rng& rng) {
  GlorotUniform(weight_, in_dim(), out_dim(), rng);
  bias_.value.setZero();
}

Matrix Dense::Forward(const Matrix& x) {
  if (x.cols() != weight_.value.cols()) {
    throw ConfigError(weight_.name + ": input has " + std::to_string(x.cols()) +
                      " columns, expected " +
                      std::to_string(weight_.value.cols()));
  }
  input_ = x;
  Matrix y = x * weight_.value.transpose();
  y.rowwise() += bias_.value.row(0);
  return y;
}

Matrix Dense::Backward(const Matrix& grad_out) {
  if (grad_out.cols() != weight_.value.rows() ||
      grad_out.rows() != input_.rows()) {
    throw ConfigError(weight_.name + ": gradient shape mismatch");
  }
  weight_.grad.noalias() += grad_out.transpose() * input_;
  bias_.grad.row(0) += grad_out.colwise().sum();
  return grad_out * weight_.value;
}

Matrix Relu::Forward(const Matrix& x) {
  output_ = x.cwiseMax(0.0);
  return output_;
}

Matrix Relu::Backward(const Matrix& grad_out) const {
  return (output_.array() > 0.0).select(grad_out, 0.0);
}

Matrix GradientReversal::Backward(const Matrix& grad_out) const {
  if (identity_) return grad_out;
  return -lambda_ * grad_out;
}

void GradientReversal::set_lambda(double lambda) {
  if (!(lambda >= 0.0)) throw ConfigError("GRL lambda must be >= 0");
  lambda_ = lambda;
}

Matrix MeanPoolTime::Forward(const Matrix& x) {
  if (x.rows() == 0) throw DataError("mean pooling over an empty sequence");
  rows_ = x.rows();
  return x.colwise().mean();
}

Matrix MeanPoolTime::Backward(const Matrix& grad_out) const {
  return grad_out.replicate(rows_, 1) / static_cast<double>(rows_);
}

RowVector Softmax(const RowVector& logits) {
  const double max = logits.maxCoeff();
  RowVector e = (logits.array() - max).exp();
  return e / e.sum();
}

LossAndGrad SoftmaxCrossEntropy(const RowVector& logits, int target) {
  if (target < 0 || target >= logits.size()) {
    throw ConfigError("class index " + std::to_string(target) +
                      " out of range for " + std::to_string(logits.size()) +
                      " classes");
  }
  const double max = logits.maxCoeff();
  const RowVector shifted = logits.array() - max;
  const double log_sum = std::log(shifted.array().exp().sum());
  LossAndGrad out;
  out.loss = log_sum - shifted[target];
  out.grad = (shifted.array() - log_sum).exp();
  out.grad[target] -= 1.0;
  return out;
}

}  // namespace davoc::nn
