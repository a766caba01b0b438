#ifndef DAVOC_EVAL_STATS_H_
#define DAVOC_EVAL_STATS_H_

#include <span>
#include <vector>

namespace davoc {

struct SeedSummary {
  std::vector<double> values;
  double mean = 0.0;
  double stddev = 0.0;  // sample (n - 1) standard deviation; 0 for n = 1
};

SeedSummary AggregateSeeds(std::span<const double> runs);

struct WelchResult {
  double t = 0.0;
  double dof = 0.0;
  double p_value = 1.0;  // two-sided
};

// Unpaired two-sided Welch t-test. Each sample needs at least two values.
// If both variances are zero the result is p = 1 for equal means and p = 0
// otherwise.
WelchResult WelchTTest(std::span<const double> a, std::span<const double> b);

// Two-sided tail probability P(|T| >= |t|) for Student's t with `dof`
// degrees of freedom (fractional dof allowed).
double StudentTTwoSidedP(double t, double dof);

}  // namespace davoc

#endif  // DAVOC_EVAL_STATS_H_
