#include "davoc/nn/gradcheck.h"

#include <algorithm>
#include <cmath>
#include <vector>

#include "davoc/common/error.h"

namespace davoc::nn {

double RelativeError(double analytic, double numeric, double floor) {
  const double scale =
      std::max({std::abs(analytic), std::abs(numeric), floor});
  return std::abs(analytic - numeric) / scale;
}

GradCheckResult FiniteDifferenceCheck(
    const ParamList& params, const std::function<double(bool)>& objective,
    double eps) {
  if (!(eps > 0.0)) throw ConfigError("finite-difference eps must be > 0");
  objective(true);
  std::vector<Matrix> analytic;
  for (const Param* p : params) analytic.push_back(p->grad);

  GradCheckResult result;
  for (size_t k = 0; k < params.size(); ++k) {
    Param& p = *params[k];
    for (Eigen::Index i = 0; i < p.value.size(); ++i) {
      double& theta = p.value.data()[i];
      const double saved = theta;
      theta = saved + eps;
      const double plus = objective(false);
      theta = saved - eps;
      const double minus = objective(false);
      theta = saved;
      const double numeric = (plus - minus) / (2.0 * eps);
      const double a = analytic[k].data()[i];
      const double err = RelativeError(a, numeric);
      ++result.entries_checked;
      if (err > result.max_relative_error || result.worst_index < 0) {
        result.max_relative_error = err;
        result.worst_param = p.name;
        result.worst_index = i;
        result.analytic = a;
        result.numeric = numeric;
      }
    }
  }
  return result;
}

}  // namespace davoc::nn
