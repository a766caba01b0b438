#include <algorithm>
#include <cmath>
#include <numbers>
#include <set>
#include <vector>

#include "davoc/common/error.h"
#include "davoc/common/rng.h"
#include "davoc/eval/pr_curve.h"
#include "davoc/eval/probe.h"
#include "davoc/eval/stats.h"
#include "doctest.h"

using namespace davoc;

namespace {

// Enumerates every threshold, counting predictions from scratch at each one.
double BruteForceAp(const std::vector<double>& scores, const std::vector<int>& labels) {
  std::set<double, std::greater<>> thresholds(scores.begin(), scores.end());
  int positives = 0;
  for (int y : labels) positives += y;
  double ap = 0.0, prev_recall = 0.0;
  for (double t : thresholds) {
    int tp = 0, fp = 0;
    for (size_t i = 0; i < scores.size(); ++i) {
      if (scores[i] >= t) (labels[i] ? tp : fp)++;
    }
    const double recall = static_cast<double>(tp) / positives;
    const double precision = static_cast<double>(tp) / (tp + fp);
    ap += (recall - prev_recall) * precision;
    prev_recall = recall;
  }
  return ap;
}

double TDensity(double x, double dof) {
  const double log_norm = std::lgamma((dof + 1) / 2) - std::lgamma(dof / 2) -
                          0.5 * std::log(dof * std::numbers::pi);
  return std::exp(log_norm - (dof + 1) / 2 * std::log1p(x * x / dof));
}

// 1 - 2 * integral_0^|t| of the density, composite Simpson.
double QuadratureTwoSidedP(double t, double dof) {
  const int n = 20000;
  const double h = std::abs(t) / n;
  double sum = TDensity(0, dof) + TDensity(std::abs(t), dof);
  for (int i = 1; i < n; ++i) sum += (i % 2 ? 4 : 2) * TDensity(i * h, dof);
  return 1.0 - 2.0 * sum * h / 3.0;
}

}  // namespace

TEST_CASE("PR-AUC equals brute-force enumeration on every small instance") {
  size_t instances = 0;
  for (int n = 1; n <= 6; ++n) {
    int score_patterns = 1;
    for (int i = 0; i < n; ++i) score_patterns *= 3;
    for (int lab = 1; lab < (1 << n); ++lab) {
      std::vector<int> labels(n);
      for (int i = 0; i < n; ++i) labels[i] = (lab >> i) & 1;
      for (int code = 0; code < score_patterns; ++code) {
        std::vector<double> scores(n);
        int c = code;
        for (int i = 0; i < n; ++i, c /= 3) scores[i] = 0.25 * (c % 3);
        CHECK(PrAuc(scores, labels) == doctest::Approx(BruteForceAp(scores, labels)).epsilon(1e-14));
        ++instances;
      }
    }
  }
  Rng rng = MakeRng(3, 0);
  for (int n = 7; n <= 8; ++n) {
    for (int lab = 1; lab < (1 << n); ++lab) {
      std::vector<int> labels(n);
      for (int i = 0; i < n; ++i) labels[i] = (lab >> i) & 1;
      for (int draw = 0; draw < 8; ++draw) {
        std::vector<double> scores(n);
        const int levels = 2 + draw;  // coarse levels force ties
        for (double& s : scores) s = static_cast<double>(UniformIndex(rng, levels)) / levels;
        CHECK(PrAuc(scores, labels) == doctest::Approx(BruteForceAp(scores, labels)).epsilon(1e-14));
        ++instances;
      }
    }
  }
  CHECK(instances > 50000);
}

TEST_CASE("PR-AUC is invariant under strictly increasing transforms") {
  Rng rng = MakeRng(4, 0);
  for (int trial = 0; trial < 100; ++trial) {
    const size_t n = 5 + UniformIndex(rng, 60);
    std::vector<double> scores(n);
    std::vector<int> labels(n);
    for (size_t i = 0; i < n; ++i) {
      scores[i] = std::round(UniformRange(rng, -3, 3) * 4) / 4;
      labels[i] = Uniform01(rng) < 0.4 ? 1 : 0;
    }
    labels[0] = 1;
    std::vector<double> a(n), b(n), c(n);
    for (size_t i = 0; i < n; ++i) {
      a[i] = std::exp(scores[i]);
      b[i] = 1.0 / (1.0 + std::exp(-3 * scores[i]));
      c[i] = scores[i] * scores[i] * scores[i] + 7.0;
    }
    const double base = PrAuc(scores, labels);
    CHECK(PrAuc(a, labels) == base);
    CHECK(PrAuc(b, labels) == base);
    CHECK(PrAuc(c, labels) == base);
  }
}

TEST_CASE("PR-AUC edge cases") {
  const std::vector<double> s = {0.9, 0.8, 0.3, 0.1};
  CHECK(PrAuc(s, std::vector<int>{1, 1, 0, 0}) == 1.0);
  CHECK(PrAuc(s, std::vector<int>{1, 1, 1, 1}) == 1.0);
  // Fully reversed ranking.
  CHECK(PrAuc(s, std::vector<int>{0, 0, 1, 1}) == doctest::Approx(0.5 * 1.0 / 3 + 0.5 * 0.5));
  // One tied group: precision is the prevalence.
  const std::vector<double> flat(5, 0.5);
  CHECK(PrAuc(flat, std::vector<int>{1, 0, 1, 0, 0}) == doctest::Approx(0.4));

  const PrCurve curve = ComputePrCurve(s, std::vector<int>{1, 0, 1, 0});
  CHECK(curve.points.size() == 4);
  CHECK(curve.n_positive == 2);
  CHECK(curve.n_negative == 2);
  CHECK(curve.points.back().recall == 1.0);

  CHECK_THROWS_AS(PrAuc(s, std::vector<int>{0, 0, 0, 0}), Error);
  CHECK_THROWS_AS(PrAuc(s, std::vector<int>{1, 0}), Error);
  CHECK_THROWS_AS(PrAuc(s, std::vector<int>{1, 2, 0, 0}), Error);
  const std::vector<double> bad = {0.1, std::nan("")};
  CHECK_THROWS_AS(PrAuc(bad, std::vector<int>{1, 0}), Error);
}

TEST_CASE("Student t tail probability matches numerical integration") {
  for (double dof : {1.0, 2.5, 4.0, 7.3, 30.0, 200.0}) {
    for (double t : {0.0, 0.3, 1.0, 2.0, 2.776, 5.0}) {
      CAPTURE(dof);
      CAPTURE(t);
      CHECK(StudentTTwoSidedP(t, dof) == doctest::Approx(QuadratureTwoSidedP(t, dof)).epsilon(1e-8));
      CHECK(StudentTTwoSidedP(-t, dof) == StudentTTwoSidedP(t, dof));
    }
  }
  // Cauchy closed form.
  CHECK(StudentTTwoSidedP(1.0, 1.0) == doctest::Approx(0.5).epsilon(1e-12));
}

TEST_CASE("Welch t-test against hand-computed statistics") {
  const std::vector<double> a = {0.91, 0.95, 0.93, 0.97, 0.94};
  const std::vector<double> b = {0.84, 0.86, 0.81, 0.88};
  auto mean = [](const std::vector<double>& v) {
    double s = 0;
    for (double x : v) s += x;
    return s / v.size();
  };
  auto var = [&](const std::vector<double>& v) {
    const double m = mean(v);
    double s = 0;
    for (double x : v) s += (x - m) * (x - m);
    return s / (v.size() - 1);
  };
  const double sa = var(a) / a.size(), sb = var(b) / b.size();
  const double t = (mean(a) - mean(b)) / std::sqrt(sa + sb);
  const double dof = (sa + sb) * (sa + sb) /
                     (sa * sa / (a.size() - 1) + sb * sb / (b.size() - 1));
  const WelchResult w = WelchTTest(a, b);
  CHECK(w.t == doctest::Approx(t).epsilon(1e-12));
  CHECK(w.dof == doctest::Approx(dof).epsilon(1e-12));
  CHECK(w.p_value == doctest::Approx(QuadratureTwoSidedP(t, dof)).epsilon(1e-8));
  CHECK(w.p_value < 0.01);

  const WelchResult same = WelchTTest(a, a);
  CHECK(same.t == 0.0);
  CHECK(same.p_value == doctest::Approx(1.0));

  const std::vector<double> c1 = {1.0, 1.0}, c2 = {2.0, 2.0};
  CHECK(WelchTTest(c1, c1).p_value == 1.0);
  CHECK(WelchTTest(c1, c2).p_value == 0.0);
  const std::vector<double> one = {1.0};
  CHECK_THROWS_AS(WelchTTest(one, a), Error);
}

TEST_CASE("seed aggregation") {
  const std::vector<double> v = {0.8, 0.9, 1.0};
  const SeedSummary s = AggregateSeeds(v);
  CHECK(s.mean == doctest::Approx(0.9));
  CHECK(s.stddev == doctest::Approx(0.1));
  CHECK(s.values == v);
  const std::vector<double> single = {0.7};
  CHECK(AggregateSeeds(single).stddev == 0.0);
}

TEST_CASE("linear probe") {
  Rng rng = MakeRng(8, 0);
  Matrix x(80, 3);
  std::vector<int> y(80);
  for (int i = 0; i < 80; ++i) {
    y[i] = i % 2;
    x(i, 0) = Gaussian(rng) + (y[i] ? 4.0 : -4.0);
    x(i, 1) = Gaussian(rng);
    x(i, 2) = 1000.0 + 50.0 * Gaussian(rng);
  }
  LinearProbe probe;
  probe.Fit(x, y);
  CHECK(probe.Accuracy(x, y) == 1.0);
  CHECK(CrossValidatedAccuracy(x, y, 5, 1) > 0.97);

  Matrix noise(80, 3);
  for (Eigen::Index i = 0; i < noise.size(); ++i) noise.data()[i] = Gaussian(rng);
  CHECK(CrossValidatedAccuracy(noise, y, 5, 1) < 0.75);

  Vector proba(4);
  proba << 0.9, 0.2, 0.6, 0.4;
  CHECK(BalancedAccuracy(proba, {1, 0, 0, 0}) == doctest::Approx((1.0 + 2.0 / 3) / 2));
  CHECK_THROWS_AS(probe.Fit(x, std::vector<int>(79, 1)), Error);
  CHECK_THROWS_AS(CrossValidatedAccuracy(x, y, 1, 1), Error);
}
