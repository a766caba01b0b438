#include "davoc/adapt/experiment.h"

#include <atomic>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <map>
#include <sstream>
#include <thread>

#include "davoc/common/error.h"

namespace davoc {

void ParallelFor(size_t n, int jobs, const std::function<void(size_t)>& fn) {
  const size_t workers = std::min<size_t>(n, static_cast<size_t>(std::max(1, jobs)));
  if (workers <= 1) {
    for (size_t i = 0; i < n; ++i) fn(i);
    return;
  }
  std::atomic<size_t> next{0};
  std::vector<std::thread> pool;
  for (size_t w = 0; w < workers; ++w) {
    pool.emplace_back([&] {
      for (size_t i = next++; i < n; i = next++) fn(i);
    });
  }
  for (std::thread& t : pool) t.join();
}

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

SeedSummary SummarizeFinite(const std::vector<double>& values) {
  std::vector<double> ok;
  for (double v : values) {
    if (std::isfinite(v)) ok.push_back(v);
  }
  if (ok.empty()) {
    SeedSummary s;
    s.mean = kNaN;
    s.stddev = kNaN;
    return s;
  }
  return AggregateSeeds(ok);
}

std::string Num(double v, int digits = 4) {
  if (!std::isfinite(v)) return "nan";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.*f", digits, v);
  return buf;
}

}  // namespace

const RegimeRow* RegimeMatrixReport::Find(Regime r) const {
  for (const RegimeRow& row : rows) {
    if (row.regime == r) return &row;
  }
  return nullptr;
}

RegimeMatrixReport RunRegimeMatrix(const DomainData& data,
                                   const RegimeMatrixOptions& options) {
  if (options.regimes.empty() || options.seeds.empty()) {
    throw ConfigError("regime matrix needs at least one regime and one seed");
  }
  const size_t n_seeds = options.seeds.size();
  RegimeMatrixReport report;
  report.seeds = options.seeds;
  for (Regime r : options.regimes) {
    RegimeRow row{r, std::vector<double>(n_seeds, kNaN),
                  std::vector<double>(n_seeds, kNaN),
                  std::vector<int64_t>(n_seeds, 0),
                  std::vector<std::string>(n_seeds), {}, {}};
    report.rows.push_back(std::move(row));
  }

  ParallelFor(n_seeds, options.jobs, [&](size_t si) {
    std::optional<ModelGraph> source_model;
    auto source_only = [&]() -> ModelGraph& {
      if (!source_model) {
        TrainConfig cfg = options.base;
        cfg.regime = Regime::kSourceOnly;
        cfg.seed = options.seeds[si];
        source_model.emplace(TrainSourceOnly(cfg, data.source_train).model);
      }
      return *source_model;
    };
    for (RegimeRow& row : report.rows) {
      try {
        TrainConfig cfg = options.base;
        cfg.regime = row.regime;
        cfg.seed = options.seeds[si];
        std::optional<TrainResult> result;
        if (row.regime == Regime::kSourceOnly) {
          result.emplace(TrainResult{source_only(), {}, 0});
        } else if (row.regime == Regime::kFrozenFineTune) {
          cfg.epochs = options.frozen_epochs;
          result.emplace(TrainFrozenFineTune(cfg, source_only(), data.target_adapt));
        } else {
          result.emplace(Train(cfg, data));
        }
        row.target_pr_auc[si] = EvaluatePrAuc(result->model, data.target_test);
        row.source_pr_auc[si] = EvaluatePrAuc(result->model, data.source_test);
        row.target_label_reads[si] = result->target_label_reads;
      } catch (const std::exception& e) {
        row.errors[si] = e.what();
      }
    }
  });

  for (RegimeRow& row : report.rows) {
    row.target = SummarizeFinite(row.target_pr_auc);
    row.source = SummarizeFinite(row.source_pr_auc);
  }
  const RegimeRow* dat = report.Find(Regime::kDatUnsupervised);
  const RegimeRow* base = report.Find(Regime::kSourceOnly);
  if (dat && base && dat->target.values.size() >= 2 &&
      base->target.values.size() >= 2) {
    report.dat_unsup_vs_source_only =
        WelchTTest(dat->target.values, base->target.values);
  }
  return report;
}

void WriteRegimeMatrixCsv(const std::string& path, const RegimeMatrixReport& report) {
  std::ofstream out(path);
  if (!out) throw DataError("cannot write " + path);
  out << "regime,seed,target_pr_auc,source_pr_auc,target_label_reads,error\n";
  for (const RegimeRow& row : report.rows) {
    for (size_t i = 0; i < report.seeds.size(); ++i) {
      out << RegimeName(row.regime) << ',' << report.seeds[i] << ','
          << Num(row.target_pr_auc[i], 6) << ',' << Num(row.source_pr_auc[i], 6)
          << ',' << row.target_label_reads[i] << ",\"" << row.errors[i] << "\"\n";
    }
  }
}

std::string FormatRegimeMatrix(const RegimeMatrixReport& report) {
  std::ostringstream s;
  char line[160];
  std::snprintf(line, sizeof line, "%-18s %12s %10s %12s %6s\n", "regime",
                "target_mean", "target_sd", "source_mean", "fails");
  s << line;
  for (const RegimeRow& row : report.rows) {
    int fails = 0;
    for (const std::string& e : row.errors) fails += !e.empty();
    std::snprintf(line, sizeof line, "%-18s %12s %10s %12s %6d\n",
                  RegimeName(row.regime).c_str(), Num(row.target.mean).c_str(),
                  Num(row.target.stddev).c_str(), Num(row.source.mean).c_str(),
                  fails);
    s << line;
  }
  if (report.dat_unsup_vs_source_only) {
    const WelchResult& w = *report.dat_unsup_vs_source_only;
    s << "welch dat-unsup vs source-only: t=" << Num(w.t, 3)
      << " dof=" << Num(w.dof, 2) << " p=" << Num(w.p_value, 5) << '\n';
  }
  for (const RegimeRow& row : report.rows) {
    for (size_t i = 0; i < row.errors.size(); ++i) {
      if (!row.errors[i].empty()) {
        s << "failed: " << RegimeName(row.regime) << " seed " << report.seeds[i]
          << ": " << row.errors[i] << '\n';
      }
    }
  }
  return s.str();
}

std::string FeatureCellKey::Tag() const {
  FeatureConfig f;
  f.kind = kind;
  f.window_ms = window_ms;
  f.normalized = normalized;
  return f.Tag() + "-" + ModelKindName(model);
}

FeatureMatrixReport RunFeatureMatrix(std::span<const LoadedUtterance> utterances,
                                     const FeatureMatrixOptions& options) {
  if (options.kinds.empty() || options.normalized.empty() ||
      options.windows_ms.empty() || options.models.empty() || options.seeds.empty()) {
    throw ConfigError("feature matrix has an empty axis");
  }
  FeatureMatrixReport report;
  report.seeds = options.seeds;
  for (FeatureKind kind : options.kinds) {
    for (bool norm : options.normalized) {
      for (double window : options.windows_ms) {
        for (ModelKind model : options.models) {
          FeatureCell cell;
          cell.key = {kind, window, norm, model};
          cell.pr_auc.assign(options.seeds.size(), kNaN);
          cell.errors.assign(options.seeds.size(), "");
          report.cells.push_back(std::move(cell));
        }
      }
    }
  }

  ParallelFor(report.cells.size(), options.jobs, [&](size_t ci) {
    FeatureCell& cell = report.cells[ci];
    TrainConfig cfg = options.base;
    cfg.regime = Regime::kSourceOnly;
    cfg.features.kind = cell.key.kind;
    cfg.features.window_ms = cell.key.window_ms;
    cfg.features.normalized = cell.key.normalized;
    cfg.model.kind = cell.key.model;
    std::optional<DomainData> data;
    try {
      cell.input_dim = ModelInputDim(cfg.features, cell.key.model);
      cfg.model.input_dim = cell.input_dim;
      data.emplace(BuildDomainData(utterances, cfg.features, cell.key.model));
    } catch (const std::exception& e) {
      for (std::string& err : cell.errors) err = e.what();
      return;
    }
    for (size_t si = 0; si < options.seeds.size(); ++si) {
      try {
        cfg.seed = options.seeds[si];
        TrainResult result = TrainSourceOnly(cfg, data->source_train);
        cell.pr_auc[si] = EvaluatePrAuc(result.model, data->source_test);
      } catch (const std::exception& e) {
        cell.errors[si] = e.what();
      }
    }
  });

  for (FeatureCell& cell : report.cells) cell.summary = SummarizeFinite(cell.pr_auc);
  return report;
}

void WriteFeatureMatrixCsv(const std::string& path, const FeatureMatrixReport& report) {
  std::ofstream out(path);
  if (!out) throw DataError("cannot write " + path);
  out << "features,window_ms,normalized,model,input_dim,seed,pr_auc,error\n";
  for (const FeatureCell& cell : report.cells) {
    for (size_t i = 0; i < report.seeds.size(); ++i) {
      out << FeatureKindName(cell.key.kind) << ',' << cell.key.window_ms << ','
          << (cell.key.normalized ? 1 : 0) << ',' << ModelKindName(cell.key.model)
          << ',' << cell.input_dim << ',' << report.seeds[i] << ','
          << Num(cell.pr_auc[i], 6) << ",\"" << cell.errors[i] << "\"\n";
    }
  }
}

std::string FormatFeatureMatrix(const FeatureMatrixReport& report) {
  std::ostringstream s;
  char line[160];
  std::snprintf(line, sizeof line, "%-8s %6s %6s %6s %6s %9s %9s\n", "features",
                "norm", "window", "model", "dims", "mean", "sd");
  s << line;
  for (const FeatureCell& cell : report.cells) {
    std::snprintf(line, sizeof line, "%-8s %6s %6.0f %6s %6d %9s %9s\n",
                  FeatureKindName(cell.key.kind).c_str(),
                  cell.key.normalized ? "yes" : "no", cell.key.window_ms,
                  ModelKindName(cell.key.model).c_str(), cell.input_dim,
                  Num(cell.summary.mean).c_str(), Num(cell.summary.stddev).c_str());
    s << line;
  }
  for (const FeatureCell& cell : report.cells) {
    for (size_t i = 0; i < cell.errors.size(); ++i) {
      if (!cell.errors[i].empty()) {
        s << "failed: " << cell.key.Tag() << " seed " << report.seeds[i] << ": "
          << cell.errors[i] << '\n';
      }
    }
  }
  return s.str();
}

}  // namespace davoc
