#include "davoc/eval/stats.h"

#include <cmath>
#include <limits>
#include <numeric>

#include <boost/math/special_functions/beta.hpp>

#include "davoc/common/error.h"

namespace davoc {
namespace {

double Mean(std::span<const double> v) {
  return std::accumulate(v.begin(), v.end(), 0.0) / static_cast<double>(v.size());
}

double SampleVariance(std::span<const double> v, double mean) {
  double ss = 0.0;
  for (double x : v) ss += (x - mean) * (x - mean);
  return ss / static_cast<double>(v.size() - 1);
}

}  // namespace

SeedSummary AggregateSeeds(std::span<const double> runs) {
  if (runs.empty()) throw DataError("cannot aggregate an empty run list");
  SeedSummary s;
  s.values.assign(runs.begin(), runs.end());
  s.mean = Mean(runs);
  s.stddev = runs.size() > 1 ? std::sqrt(SampleVariance(runs, s.mean)) : 0.0;
  return s;
}

double StudentTTwoSidedP(double t, double dof) {
  if (!(dof > 0.0)) throw DataError("t distribution needs dof > 0");
  if (std::isinf(t)) return 0.0;
  // P(|T| >= |t|) = I_{dof / (dof + t^2)}(dof / 2, 1 / 2)
  const double x = dof / (dof + t * t);
  return boost::math::ibeta(dof / 2.0, 0.5, x);
}

WelchResult WelchTTest(std::span<const double> a, std::span<const double> b) {
  if (a.size() < 2 || b.size() < 2) {
    throw DataError("Welch t-test needs at least two values per sample");
  }
  const double ma = Mean(a), mb = Mean(b);
  const double va = SampleVariance(a, ma) / static_cast<double>(a.size());
  const double vb = SampleVariance(b, mb) / static_cast<double>(b.size());
  WelchResult r;
  const double se2 = va + vb;
  if (se2 == 0.0) {
    r.t = ma == mb ? 0.0 : std::copysign(std::numeric_limits<double>::infinity(),
                                         ma - mb);
    r.dof = static_cast<double>(a.size() + b.size() - 2);
    r.p_value = ma == mb ? 1.0 : 0.0;
    return r;
  }
  r.t = (ma - mb) / std::sqrt(se2);
  r.dof = se2 * se2 /
          (va * va / static_cast<double>(a.size() - 1) +
           vb * vb / static_cast<double>(b.size() - 1));
  r.p_value = StudentTTwoSidedP(r.t, r.dof);
  return r;
}

}  // namespace davoc
