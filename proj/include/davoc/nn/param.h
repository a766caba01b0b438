#ifndef DAVOC_NN_PARAM_H_
#define DAVOC_NN_PARAM_H_

#include <string>
#include <vector>

#include "davoc/common/matrix.h"
#include "davoc/common/rng.h"

namespace davoc::nn {

// A trainable tensor and its accumulated gradient (always the same shape).
struct Param {
  Param() = default;
  Param(std::string name, Eigen::Index rows, Eigen::Index cols)
      : name(std::move(name)),
        value(Matrix::Zero(rows, cols)),
        grad(Matrix::Zero(rows, cols)) {}

  std::string name;
  Matrix value;
  Matrix grad;
};

using ParamList = std::vector<Param*>;

void ZeroGrads(const ParamList& params);
double GradNorm(const ParamList& params);

// Rescales all gradients so their joint L2 norm is at most max_norm.
// Returns the norm before clipping.
double ClipGradNorm(const ParamList& params, double max_norm);

// Name of the first parameter whose gradient has a NaN or Inf, or "" if none.
std::string FirstNonFiniteGrad(const ParamList& params);

// uniform(-a, a), a = sqrt(6 / (fan_in + fan_out)).
void GlorotUniform(Param& p, int fan_in, int fan_out, Rng& rng);

// FNV-1a over the raw bytes of every value; used to assert freezing.
uint64_t Checksum(const ParamList& params);

}  // namespace davoc::nn

#endif  // DAVOC_NN_PARAM_H_
