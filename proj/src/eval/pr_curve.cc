#include "davoc/eval/pr_curve.h"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numeric>

#include "davoc/common/error.h"

namespace davoc {

PrCurve ComputePrCurve(std::span<const double> scores,
                       std::span<const int> labels) {
  if (scores.size() != labels.size()) {
    throw DataError("scores and labels differ in length");
  }
  PrCurve curve;
  for (size_t i = 0; i < scores.size(); ++i) {
    if (!std::isfinite(scores[i])) throw DataError("non-finite score");
    if (labels[i] == 1) {
      ++curve.n_positive;
    } else if (labels[i] == 0) {
      ++curve.n_negative;
    } else {
      throw DataError("labels must be 0 or 1");
    }
  }
  if (curve.n_positive == 0) {
    throw DataError("PR curve needs at least one positive label");
  }

  std::vector<size_t> order(scores.size());
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(),
            [&](size_t a, size_t b) { return scores[a] > scores[b]; });

  int true_pos = 0, predicted = 0;
  double prev_recall = 0.0;
  for (size_t i = 0; i < order.size();) {
    const double threshold = scores[order[i]];
    for (; i < order.size() && scores[order[i]] == threshold; ++i) {
      ++predicted;
      true_pos += labels[order[i]];
    }
    const double recall = static_cast<double>(true_pos) / curve.n_positive;
    const double precision = static_cast<double>(true_pos) / predicted;
    curve.auc += (recall - prev_recall) * precision;
    prev_recall = recall;
    curve.points.push_back({threshold, recall, precision});
  }
  return curve;
}

void WritePrCurveCsv(const std::string& path, const PrCurve& curve) {
  std::ofstream out(path);
  if (!out) throw DataError("cannot write " + path);
  out.precision(17);
  out << "recall,precision\n0,1\n";
  for (const PrPoint& p : curve.points) {
    out << p.recall << ',' << p.precision << '\n';
  }
}

}  // namespace davoc
