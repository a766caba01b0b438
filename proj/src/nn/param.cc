#include "davoc/nn/param.h"

#include <cmath>
#include <cstring>

namespace davoc::nn {

void ZeroGrads(const ParamList& params) {
  for (Param* p : params) p->grad.setZero();
}

double GradNorm(const ParamList& params) {
  double sq = 0.0;
  for (const Param* p : params) sq += p->grad.squaredNorm();
  return std::sqrt(sq);
}

double ClipGradNorm(const ParamList& params, double max_norm) {
  const double norm = GradNorm(params);
  if (norm > max_norm) {
    const double scale = max_norm / norm;
    for (Param* p : params) p->grad *= scale;
  }
  return norm;
}

std::string FirstNonFiniteGrad(const ParamList& params) {
  for (const Param* p : params) {
    if (!p->grad.allFinite()) return p->name;
  }
  return "";
}

void GlorotUniform(Param& p, int fan_in, int fan_out, Rng& rng) {
  const double a = std::sqrt(6.0 / (fan_in + fan_out));
  for (Eigen::Index i = 0; i < p.value.size(); ++i) {
    p.value.data()[i] = UniformRange(rng, -a, a);
  }
}

uint64_t Checksum(const ParamList& params) {
  uint64_t h = 1469598103934665603ULL;
  for (const Param* p : params) {
    const auto* bytes = reinterpret_cast<const unsigned char*>(p->value.data());
    const size_t n = static_cast<size_t>(p->value.size()) * sizeof(double);
    for (size_t i = 0; i < n; ++i) {
      h ^= bytes[i];
      h *= 1099511628211ULL;
    }
  }
  return h;
}

}  // namespace davoc::nn
