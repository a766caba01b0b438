#ifndef DAVOC_EVAL_PR_CURVE_H_
#define DAVOC_EVAL_PR_CURVE_H_

#include <span>
#include <string>
#include <vector>

namespace davoc {

struct PrPoint {
  double threshold;
  double recall;
  double precision;
};

struct PrCurve {
  std::vector<PrPoint> points;  // one per distinct score, descending score
  double auc = 0.0;
  int n_positive = 0;
  int n_negative = 0;
};

// Average-precision PR-AUC. Scores are visited in descending order and every
// distinct score value is one threshold (ties are never split), so
//   auc = sum_k (recall_k - recall_{k-1}) * precision_k,  recall_0 = 0.
// labels: 1 = positive (pathological), 0 = negative. Throws DataError on a
// length mismatch, non-finite scores, labels outside {0,1} or no positives.
PrCurve ComputePrCurve(std::span<const double> scores,
                       std::span<const int> labels);

inline double PrAuc(std::span<const double> scores,
                    std::span<const int> labels) {
  return ComputePrCurve(scores, labels).auc;
}

// "recall,precision" rows, preceded by the (0, 1) anchor point.
void WritePrCurveCsv(const std::string& path, const PrCurve& curve);

}  // namespace davoc

#endif  // DAVOC_EVAL_PR_CURVE_H_
