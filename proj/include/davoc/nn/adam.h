#ifndef DAVOC_NN_ADAM_H_
#define DAVOC_NN_ADAM_H_

#include <cstdint>
#include <vector>

#include "davoc/common/matrix.h"
#include "davoc/nn/param.h"

namespace davoc::nn {

struct AdamOptions {
  double learning_rate = 1e-3;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double epsilon = 1e-8;
};

// Adam with bias-corrected moments. The parameter list is bound at
// construction; the pointed-to Params must outlive the optimizer.
class Adam {
 public:
  Adam(ParamList params, AdamOptions options = {});

  // Applies one update from the current gradients. Throws NumericError
  // (naming the parameter) if any gradient is not finite; nothing is
  // modified in that case.
  void Step();

  int64_t steps() const { return steps_; }
  const AdamOptions& options() const { return options_; }
  void set_learning_rate(double lr) { options_.learning_rate = lr; }

 private:
  ParamList params_;
  AdamOptions options_;
  std::vector<Matrix> first_moment_;
  std::vector<Matrix> second_moment_;
  int64_t steps_ = 0;
};

}  // namespace davoc::nn

#endif  // DAVOC_NN_ADAM_H_
