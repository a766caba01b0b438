#ifndef DAVOC_NN_GRADCHECK_H_
#define DAVOC_NN_GRADCHECK_H_

#include <functional>
#include <string>

#include "davoc/nn/param.h"

namespace davoc::nn {

struct GradCheckResult {
  double max_relative_error = 0.0;
  std::string worst_param;
  Eigen::Index worst_index = -1;
  double analytic = 0.0;
  double numeric = 0.0;
  size_t entries_checked = 0;
};

// |a - n| / max(|a|, |n|, floor). The floor keeps entries whose true
// gradient is zero from dominating through rounding noise.
double RelativeError(double analytic, double numeric, double floor = 1e-6);

// Compares analytic gradients to central differences
// (L(theta + eps) - L(theta - eps)) / (2 eps) for every entry of every
// parameter. `objective(true)` must zero the gradients, run forward and
// backward and return the loss; `objective(false)` only returns the loss.
GradCheckResult FiniteDifferenceCheck(
    const ParamList& params, const std::function<double(bool)>& objective,
    double eps = 1e-5);

}  // namespace davoc::nn

#endif  // DAVOC_NN_GRADCHECK_H_
