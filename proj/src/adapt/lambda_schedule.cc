#include "davoc/adapt/lambda_schedule.h"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "davoc/common/error.h"

namespace davoc {

double LambdaSchedule::At(double progress) const {
  const double p = std::clamp(progress, 0.0, 1.0);
  if (kind == Kind::kConstant) return lambda0;
  return lambda0 * (2.0 / (1.0 + std::exp(-10.0 * p)) - 1.0);
}

LambdaSchedule LambdaSchedule::Parse(const std::string& text) {
  LambdaSchedule s;
  std::string value = text;
  const auto colon = text.find(':');
  if (colon != std::string::npos) {
    const std::string kind = text.substr(0, colon);
    value = text.substr(colon + 1);
    if (kind == "constant") {
      s.kind = Kind::kConstant;
    } else if (kind == "ramp") {
      s.kind = Kind::kRamp;
    } else {
      throw ConfigError("unknown lambda schedule '" + kind + "'");
    }
  }
  size_t used = 0;
  try {
    s.lambda0 = std::stod(value, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used == 0 || used != value.size()) {
    throw ConfigError("bad lambda value '" + value + "'");
  }
  if (!(s.lambda0 >= 0.0) || !std::isfinite(s.lambda0)) {
    throw ConfigError("lambda must be finite and >= 0");
  }
  return s;
}

std::string LambdaSchedule::ToString() const {
  std::ostringstream out;
  out.precision(17);
  out << (kind == Kind::kConstant ? "constant:" : "ramp:") << lambda0;
  return out.str();
}

}  // namespace davoc
