#ifndef DAVOC_ADAPT_LAMBDA_SCHEDULE_H_
#define DAVOC_ADAPT_LAMBDA_SCHEDULE_H_

#include <string>

namespace davoc {

// Weight of the reversed device-loss gradient over the course of training.
//   constant: lambda(p) = lambda0
//   ramp:     lambda(p) = lambda0 * (2 / (1 + exp(-10 p)) - 1)
struct LambdaSchedule {
  enum class Kind { kConstant, kRamp };

  Kind kind = Kind::kConstant;
  double lambda0 = 1.0;

  // progress in [0, 1]; out-of-range values are clamped.
  double At(double progress) const;

  // "constant:1.0", "ramp:0.5", or a bare number (constant).
  static LambdaSchedule Parse(const std::string& text);
  std::string ToString() const;
};

}  // namespace davoc

#endif  // DAVOC_ADAPT_LAMBDA_SCHEDULE_H_
