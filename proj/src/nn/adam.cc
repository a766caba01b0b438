#include "davoc/nn/adam.h"

#include <cmath>

#include "davoc/common/error.h"

namespace davoc::nn {

Adam::Adam(ParamList params, AdamOptions options)
    : params_(std::move(params)), options_(options) {
  if (!(options_.learning_rate > 0.0)) {
    throw ConfigError("learning rate must be positive");
  }
  for (const Param* p : params_) {
    first_moment_.push_back(Matrix::Zero(p->value.rows(), p->value.cols()));
    second_moment_.push_back(Matrix::Zero(p->value.rows(), p->value.cols()));
  }
}

void Adam::Step() {
  const std::string bad = FirstNonFiniteGrad(params_);
  if (!bad.empty()) {
    throw NumericError("non-finite gradient in " + bad + " at Adam step " +
                       std::to_string(steps_ + 1));
  }
  ++steps_;
  const double b1 = options_.beta1, b2 = options_.beta2;
  const double correction1 = 1.0 - std::pow(b1, static_cast<double>(steps_));
  const double correction2 = 1.0 - std::pow(b2, static_cast<double>(steps_));
  const double step = options_.learning_rate / correction1;
  for (size_t k = 0; k < params_.size(); ++k) {
    Param& p = *params_[k];
    Matrix& m = first_moment_[k];
    Matrix& v = second_moment_[k];
    m = b1 * m + (1.0 - b1) * p.grad;
    v = b2 * v + (1.0 - b2) * p.grad.cwiseAbs2();
    p.value.array() -= step * m.array() /
                       ((v.array() / correction2).sqrt() + options_.epsilon);
  }
}

}  // namespace davoc::nn
