#ifndef DAVOC_EVAL_PROBE_H_
#define DAVOC_EVAL_PROBE_H_

#include <cstdint>
#include <vector>

#include "davoc/common/matrix.h"

namespace davoc {

// L2-regularized logistic regression on standardized inputs, fitted by
// Newton's method. Used to measure how much of a property (device, label)
// is linearly recoverable from a set of vectors.
class LinearProbe {
 public:
  explicit LinearProbe(double l2 = 1e-2, int max_iterations = 100)
      : l2_(l2), max_iterations_(max_iterations) {}

  // x: one example per row; y in {0, 1}.
  void Fit(const Matrix& x, const std::vector<int>& y);
  Vector PredictProba(const Matrix& x) const;
  double Accuracy(const Matrix& x, const std::vector<int>& y) const;

 private:
  double l2_;
  int max_iterations_;
  RowVector mean_;
  RowVector scale_;
  Vector weights_;  // last entry is the intercept
};

// Mean of per-class recalls.
double BalancedAccuracy(const Vector& proba, const std::vector<int>& y);

// Stratified k-fold: fold assignment is a seeded shuffle within each class.
// Returns the pooled held-out balanced accuracy.
double CrossValidatedAccuracy(const Matrix& x, const std::vector<int>& y,
                              int folds, uint64_t seed, double l2 = 1e-2);

}  // namespace davoc

#endif  // DAVOC_EVAL_PROBE_H_
