#include "davoc/eval/probe.h"

#include <cmath>

#include <Eigen/Cholesky>

#include "davoc/common/error.h"
#include "davoc/common/rng.h"

namespace davoc {
namespace {

Matrix Design(const Matrix& x, const RowVector& mean, const RowVector& scale) {
  Matrix d(x.rows(), x.cols() + 1);
  d.leftCols(x.cols()) =
      ((x.rowwise() - mean).array().rowwise() / scale.array()).matrix();
  d.col(x.cols()).setOnes();
  return d;
}

}  // namespace

void LinearProbe::Fit(const Matrix& x, const std::vector<int>& y) {
  if (x.rows() != static_cast<Eigen::Index>(y.size()) || x.rows() == 0) {
    throw DataError("probe needs one label per row");
  }
  mean_ = x.colwise().mean();
  scale_ = ((x.rowwise() - mean_).cwiseAbs2().colwise().mean()).cwiseSqrt();
  for (Eigen::Index j = 0; j < scale_.size(); ++j) {
    if (scale_[j] < 1e-12) scale_[j] = 1.0;
  }
  const Matrix d = Design(x, mean_, scale_);
  Vector target(y.size());
  for (size_t i = 0; i < y.size(); ++i) target[i] = y[i];

  const Eigen::Index p = d.cols();
  Vector ridge = Vector::Constant(p, l2_);
  ridge[p - 1] = 0.0;  // intercept is not penalized
  weights_ = Vector::Zero(p);
  for (int it = 0; it < max_iterations_; ++it) {
    const Vector prob =
        (1.0 / (1.0 + (-(d * weights_)).array().exp())).matrix();
    const Vector grad =
        d.transpose() * (prob - target) + ridge.cwiseProduct(weights_);
    const Vector w = (prob.array() * (1.0 - prob.array())).matrix();
    Matrix hessian = d.transpose() * w.asDiagonal() * d;
    hessian.diagonal() += ridge + Vector::Constant(p, 1e-9);
    const Vector step = hessian.ldlt().solve(grad);
    weights_ -= step;
    if (step.cwiseAbs().maxCoeff() < 1e-10) break;
  }
}

Vector LinearProbe::PredictProba(const Matrix& x) const {
  const Matrix d = Design(x, mean_, scale_);
  return (1.0 / (1.0 + (-(d * weights_)).array().exp())).matrix();
}

double LinearProbe::Accuracy(const Matrix& x, const std::vector<int>& y) const {
  const Vector p = PredictProba(x);
  int correct = 0;
  for (size_t i = 0; i < y.size(); ++i) {
    correct += (p[i] >= 0.5 ? 1 : 0) == y[i];
  }
  return static_cast<double>(correct) / static_cast<double>(y.size());
}

double BalancedAccuracy(const Vector& proba, const std::vector<int>& y) {
  int hits[2] = {0, 0}, counts[2] = {0, 0};
  for (size_t i = 0; i < y.size(); ++i) {
    ++counts[y[i]];
    hits[y[i]] += (proba[i] >= 0.5 ? 1 : 0) == y[i];
  }
  double sum = 0.0;
  int classes = 0;
  for (int c = 0; c < 2; ++c) {
    if (counts[c] > 0) {
      sum += static_cast<double>(hits[c]) / counts[c];
      ++classes;
    }
  }
  return classes ? sum / classes : 0.0;
}

double CrossValidatedAccuracy(const Matrix& x, const std::vector<int>& y,
                              int folds, uint64_t seed, double l2) {
  if (folds < 2) throw ConfigError("cross-validation needs >= 2 folds");
  std::vector<int> fold_of(y.size());
  Rng rng = MakeRng(seed, 7);
  for (int c = 0; c < 2; ++c) {
    std::vector<size_t> members;
    for (size_t i = 0; i < y.size(); ++i) {
      if (y[i] == c) members.push_back(i);
    }
    Shuffle(members, rng);
    for (size_t k = 0; k < members.size(); ++k) {
      fold_of[members[k]] = static_cast<int>(k % folds);
    }
  }
  Vector held_out(y.size());
  for (int f = 0; f < folds; ++f) {
    std::vector<Eigen::Index> train, test;
    for (size_t i = 0; i < y.size(); ++i) {
      (fold_of[i] == f ? test : train).push_back(static_cast<Eigen::Index>(i));
    }
    if (test.empty()) continue;
    std::vector<int> y_train;
    for (Eigen::Index i : train) y_train.push_back(y[i]);
    LinearProbe probe(l2);
    probe.Fit(x(train, Eigen::all), y_train);
    const Vector p = probe.PredictProba(x(test, Eigen::all));
    for (size_t k = 0; k < test.size(); ++k) held_out[test[k]] = p[k];
  }
  return BalancedAccuracy(held_out, y);
}

}  // namespace davoc
