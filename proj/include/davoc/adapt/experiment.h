#ifndef DAVOC_ADAPT_EXPERIMENT_H_
#define DAVOC_ADAPT_EXPERIMENT_H_

#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "davoc/adapt/dataset.h"
#include "davoc/adapt/trainer.h"
#include "davoc/eval/stats.h"
#include "davoc/synth/corpus.h"

namespace davoc {

// Runs fn(0..n-1) on at most `jobs` threads. Exceptions stay inside fn.
void ParallelFor(size_t n, int jobs, const std::function<void(size_t)>& fn);

struct RegimeMatrixOptions {
  TrainConfig base;  // regime and seed are overridden per cell
  int frozen_epochs = 30;
  std::vector<Regime> regimes = {Regime::kSourceOnly, Regime::kTargetOnly,
                                 Regime::kFrozenFineTune, Regime::kDatSupervised,
                                 Regime::kDatUnsupervised};
  std::vector<uint64_t> seeds = {1, 2, 3};
  int jobs = 1;
};

struct RegimeRow {
  Regime regime;
  std::vector<double> target_pr_auc;  // one per seed, NaN for failed runs
  std::vector<double> source_pr_auc;
  std::vector<int64_t> target_label_reads;
  std::vector<std::string> errors;   // empty string for successful runs
  SeedSummary target;                // over successful seeds
  SeedSummary source;
};

struct RegimeMatrixReport {
  std::vector<uint64_t> seeds;
  std::vector<RegimeRow> rows;
  std::optional<WelchResult> dat_unsup_vs_source_only;

  const RegimeRow* Find(Regime r) const;
};

// One job per seed; frozen fine-tuning starts from that seed's source-only
// model (trained on demand if source-only is not in the row set).
RegimeMatrixReport RunRegimeMatrix(const DomainData& data,
                                   const RegimeMatrixOptions& options);
void WriteRegimeMatrixCsv(const std::string& path, const RegimeMatrixReport& report);
std::string FormatRegimeMatrix(const RegimeMatrixReport& report);

struct FeatureCellKey {
  FeatureKind kind = FeatureKind::kMfcc;
  double window_ms = 32.0;
  bool normalized = false;
  ModelKind model = ModelKind::kBlstm;

  std::string Tag() const;
};

struct FeatureMatrixOptions {
  TrainConfig base;  // features and model kind are overridden per cell
  std::vector<FeatureKind> kinds = {FeatureKind::kMfcc, FeatureKind::kFilterBank};
  std::vector<bool> normalized = {false, true};
  std::vector<double> windows_ms = {32.0, 100.0};
  std::vector<ModelKind> models = {ModelKind::kBlstm};
  std::vector<uint64_t> seeds = {1, 2, 3};
  int jobs = 1;
};

struct FeatureCell {
  FeatureCellKey key;
  int input_dim = 0;
  std::vector<double> pr_auc;  // source_test, one per seed
  std::vector<std::string> errors;
  SeedSummary summary;
};

struct FeatureMatrixReport {
  std::vector<uint64_t> seeds;
  std::vector<FeatureCell> cells;
};

// Source-only training on source_train, PR-AUC on source_test, for every
// cell of the cross product.
FeatureMatrixReport RunFeatureMatrix(std::span<const LoadedUtterance> utterances,
                                     const FeatureMatrixOptions& options);
void WriteFeatureMatrixCsv(const std::string& path, const FeatureMatrixReport& report);
std::string FormatFeatureMatrix(const FeatureMatrixReport& report);

}  // namespace davoc

#endif  // DAVOC_ADAPT_EXPERIMENT_H_
