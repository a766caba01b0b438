#ifndef DAVOC_NN_LAYERS_H_
#define DAVOC_NN_LAYERS_H_

#include <string>

#include "davoc/common/matrix.h"
#include "davoc/common/rng.h"
#include "davoc/nn/param.h"

namespace davoc::nn {

// Layers cache what they need from the most recent Forward call; Backward
// must follow the matching Forward. Inputs are one row per time step.

class Dense {
 public:
  Dense() = default;
  Dense(const std::string& name, int in_dim, int out_dim);

  void Init(Rng& rng);
  // y = x W^T + b, row by row.
  Matrix Forward(const Matrix& x);
  // Accumulates dW, db and returns dL/dx.
  Matrix Backward(const Matrix& grad_out);
  ParamList Params() { return {&weight_, &bias_}; }

  int in_dim() const { return static_cast<int>(weight_.value.cols()); }
  int out_dim() const { return static_cast<int>(weight_.value.rows()); }
  Param& weight() { return weight_; }
  Param& bias() { return bias_; }

 private:
  Param weight_;  // out x in
  Param bias_;    // 1 x out
  Matrix input_;
};

class Relu {
 public:
  Matrix Forward(const Matrix& x);
  Matrix Backward(const Matrix& grad_out) const;

 private:
  Matrix output_;
};

// Identity on the way forward. On the way back the gradient is multiplied by
// -lambda, so whatever sits below the layer ascends the loss computed above
// it. Identity mode passes gradients through unchanged; it exists to verify
// the reversal against a plain network.
class GradientReversal {
 public:
  explicit GradientReversal(double lambda = 1.0) : lambda_(lambda) {}

  Matrix Forward(const Matrix& x) const { return x; }
  Matrix Backward(const Matrix& grad_out) const;

  double lambda() const { return lambda_; }
  void set_lambda(double lambda);
  void set_identity(bool identity) { identity_ = identity; }
  bool identity() const { return identity_; }

 private:
  double lambda_;
  bool identity_ = false;
};

class MeanPoolTime {
 public:
  Matrix Forward(const Matrix& x);  // 1 x dims
  Matrix Backward(const Matrix& grad_out) const;

 private:
  Eigen::Index rows_ = 0;
};

RowVector Softmax(const RowVector& logits);

struct LossAndGrad {
  double loss;
  RowVector grad;  // dL/dlogits
};

// -log softmax(logits)[target], with max-subtraction for stability.
LossAndGrad SoftmaxCrossEntropy(const RowVector& logits, int target);

}  // namespace davoc::nn

#endif  // DAVOC_NN_LAYERS_H_
