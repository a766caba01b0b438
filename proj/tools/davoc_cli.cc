// davoc: corpus generation, feature extraction, training, evaluation and
// experiment matrices from the command line.
//
//   davoc gen-corpus --out corpus/ --seed 7
//   davoc train --manifest corpus/manifest.csv --regime dat-unsup --out run/
//   davoc eval --checkpoint run/model.davc --manifest corpus/manifest.csv
//   davoc matrix --kind regimes --scale ci --jobs 2
//   davoc gradcheck

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "davoc/adapt/dataset.h"
#include "davoc/adapt/experiment.h"
#include "davoc/adapt/presets.h"
#include "davoc/adapt/trainer.h"
#include "davoc/common/error.h"
#include "davoc/common/hash.h"
#include "davoc/common/kv_config.h"
#include "davoc/dsp/feature_cache.h"
#include "davoc/dsp/wav.h"
#include "davoc/eval/pr_curve.h"
#include "davoc/models/gradcheck_suite.h"
#include "davoc/nn/checkpoint.h"
#include "davoc/synth/corpus.h"

namespace fs = std::filesystem;
using namespace davoc;

namespace {

enum ExitCode {
  kOk = 0,
  kConfigExit = 2,
  kDataExit = 3,
  kNumericExit = 4,
  kThresholdExit = 5,
};

void EchoConfig(const std::string& command,
                const std::map<std::string, std::string>& entries) {
  std::cout << "[effective config: " << command << "]\n";
  for (const auto& [k, v] : entries) std::cout << "  " << k << " = " << v << '\n';
}

uint64_t ResolveSeed(const CLI::Option* flag, uint64_t flag_value,
                     std::optional<uint64_t> from_file) {
  if (flag->count() > 0) return flag_value;
  if (from_file) return *from_file;
  if (const char* env = std::getenv("DAVOC_SEED")) {
    try {
      return std::stoull(env);
    } catch (const std::exception&) {
      throw ConfigError(std::string("DAVOC_SEED is not an integer: ") + env);
    }
  }
  return flag_value;
}

// Feature flags shared by several subcommands.
struct FeatureFlags {
  std::string kind = "fbank";
  double window_ms = 32.0;
  bool normalized = false;
  CLI::Option* kind_opt = nullptr;
  CLI::Option* window_opt = nullptr;
  CLI::Option* norm_opt = nullptr;

  void Add(CLI::App* app) {
    kind_opt = app->add_option("--features", kind, "mfcc or fbank")->capture_default_str();
    window_opt = app->add_option("--window-ms", window_ms, "analysis window")->capture_default_str();
    norm_opt = app->add_flag("--normalized", normalized, "mean/variance normalize over time");
  }
  bool AnySet() const {
    return kind_opt->count() + window_opt->count() + norm_opt->count() > 0;
  }
  void ApplyTo(FeatureConfig& f) const {
    if (kind_opt->count()) f.kind = ParseFeatureKind(kind);
    if (window_opt->count()) f.window_ms = window_ms;
    if (norm_opt->count()) f.normalized = normalized;
  }
};

std::map<std::string, std::string> FeatureMeta(const FeatureConfig& f) {
  TrainConfig t;
  t.features = f;
  std::map<std::string, std::string> out;
  for (const auto& [k, v] : t.ToMetadata()) {
    if (k.rfind("features.", 0) == 0) out[k] = v;
  }
  return out;
}

const std::vector<Sample>& SubsetSamples(const DomainData& d, Subset s) {
  switch (s) {
    case Subset::kSourceTrain: return d.source_train;
    case Subset::kSourceTest: return d.source_test;
    case Subset::kTargetAdapt: return d.target_adapt;
    case Subset::kTargetTest: return d.target_test;
  }
  throw ConfigError("bad subset");
}

std::vector<uint64_t> ParseSeedList(const std::string& text) {
  std::vector<uint64_t> seeds;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    try {
      seeds.push_back(std::stoull(item));
    } catch (const std::exception&) {
      throw ConfigError("bad seed list '" + text + "'");
    }
  }
  if (seeds.empty()) throw ConfigError("empty seed list");
  return seeds;
}

std::vector<LoadedUtterance> CorpusFromFlags(const std::string& manifest,
                                             const std::string& scale,
                                             uint64_t seed) {
  if (!manifest.empty()) return LoadManifestAudio(manifest);
  return RecordedUtterances(GenerateCorpus(GetScalePreset(scale).corpus, seed));
}

// gen-corpus ---------------------------------------------------------------

struct GenCorpusArgs {
  std::string out;
  std::string scale = "desk";
  uint64_t seed = 1;
  CLI::Option* seed_opt = nullptr;
  bool self_test = true;
};

int GenCorpus(const GenCorpusArgs& a) {
  const uint64_t seed = ResolveSeed(a.seed_opt, a.seed, std::nullopt);
  const CorpusSpec spec = GetScalePreset(a.scale).corpus;
  EchoConfig("gen-corpus", {{"out", a.out},
                            {"scale", a.scale},
                            {"seed", std::to_string(seed)},
                            {"utterances", std::to_string(spec.Total())},
                            {"duration_s", std::to_string(spec.duration_s)}});
  const Corpus corpus = GenerateCorpus(spec, seed);
  const std::string manifest = WriteCorpus(corpus, a.out);
  uint64_t corpus_hash = HashFile(manifest);
  for (const ManifestRow& row : ReadManifest(manifest)) {
    corpus_hash = Fnv1a64(HexDigest(HashFile((fs::path(a.out) / row.path).string())),
                          corpus_hash);
  }
  std::cout << "manifest: " << manifest << '\n'
            << "files: " << corpus.entries.size() << '\n'
            << "manifest_hash: " << HexDigest(HashFile(manifest)) << '\n'
            << "corpus_hash: " << HexDigest(corpus_hash) << '\n';
  if (a.self_test) {
    const CorpusSelfTest t = RunCorpusSelfTest(corpus, seed);
    std::cout << "self_test.device_probe_accuracy: " << t.device_probe_accuracy << '\n'
              << "self_test.pathology_probe_accuracy: " << t.pathology_probe_accuracy
              << '\n';
  }
  return kOk;
}

// extract-features -----------------------------------------------------------

struct ExtractArgs {
  std::string manifest;
  std::string wav;
  std::string out;
  bool stack = false;
  FeatureFlags features;
};

int ExtractFeaturesCmd(const ExtractArgs& a) {
  if (a.manifest.empty() == a.wav.empty()) {
    throw ConfigError("give exactly one of --manifest or --wav");
  }
  FeatureConfig f;
  a.features.ApplyTo(f);
  f.Validate();
  auto meta = FeatureMeta(f);
  meta["stack"] = a.stack ? "1" : "0";
  meta["out"] = a.out;
  EchoConfig("extract-features", meta);

  auto extract = [&](const Utterance& u) {
    FeatureMatrix m = ExtractFeatures(u, f);
    if (a.stack) m = StackContext(m, f.context);
    return m;
  };
  if (!a.wav.empty()) {
    const FeatureMatrix m = extract(ReadWav(a.wav));
    WriteFeatureCache(a.out, m.data);
    std::cout << "wrote " << a.out << " (" << m.frames() << " x " << m.dims() << ")\n";
    return kOk;
  }
  fs::create_directories(a.out);
  int count = 0, dims = 0;
  for (const LoadedUtterance& lu : LoadManifestAudio(a.manifest)) {
    const FeatureMatrix m = extract(lu.utterance);
    WriteFeatureCache((fs::path(a.out) / (lu.utterance.id + ".davf")).string(), m.data);
    dims = m.dims();
    ++count;
  }
  std::cout << "wrote " << count << " feature files of width " << dims << " to "
            << a.out << '\n';
  return kOk;
}

// train ------------------------------------------------------------------------

struct TrainArgs {
  std::string manifest;
  std::string out;
  std::string config_file;
  std::string regime = "source-only";
  std::string lambda;
  std::string scale = "desk";
  std::string model = "blstm";
  std::string pretrained;
  uint64_t seed = 1;
  int epochs = 0;
  CLI::Option* regime_opt = nullptr;
  CLI::Option* lambda_opt = nullptr;
  CLI::Option* model_opt = nullptr;
  CLI::Option* seed_opt = nullptr;
  CLI::Option* epochs_opt = nullptr;
  FeatureFlags features;
};

int TrainCmd(const TrainArgs& a) {
  const ScalePreset preset = GetScalePreset(a.scale);
  TrainConfig cfg = MakeTrainConfig(preset, FeatureConfig{}, ModelKind::kBlstm);
  std::optional<uint64_t> file_seed;
  if (!a.config_file.empty()) {
    auto kv = ReadKeyValueFile(a.config_file);
    if (auto it = kv.find("seed"); it != kv.end()) {
      ApplyKeyValues({{"seed", it->second}}, cfg);
      file_seed = cfg.seed;
    }
    ApplyKeyValues(kv, cfg);
  }
  if (a.regime_opt->count()) cfg.regime = ParseRegime(a.regime);
  if (a.lambda_opt->count()) cfg.lambda = LambdaSchedule::Parse(a.lambda);
  if (a.model_opt->count()) cfg.model.kind = ParseModelKind(a.model);
  if (a.epochs_opt->count()) cfg.epochs = a.epochs;
  a.features.ApplyTo(cfg.features);
  cfg.model.input_dim = ModelInputDim(cfg.features, cfg.model.kind);
  cfg.seed = ResolveSeed(a.seed_opt, a.seed, file_seed);
  if (cfg.regime == Regime::kFrozenFineTune && !a.epochs_opt->count() &&
      (a.config_file.empty() || !ReadKeyValueFile(a.config_file).count("epochs"))) {
    cfg.epochs = preset.frozen_epochs;
  }
  cfg.Validate();

  auto meta = cfg.ToMetadata();
  meta["manifest"] = a.manifest;
  meta["out"] = a.out;
  meta["scale"] = a.scale;
  meta["model.kind"] = ModelKindName(cfg.model.kind);
  meta["model.input_dim"] = std::to_string(cfg.model.input_dim);
  if (!a.pretrained.empty()) meta["pretrained"] = a.pretrained;
  EchoConfig("train", meta);

  std::optional<ModelGraph> pretrained;
  if (cfg.regime == Regime::kFrozenFineTune) {
    if (a.pretrained.empty()) throw ConfigError("frozen-finetune needs --pretrained");
    const nn::Checkpoint ckpt = nn::LoadCheckpoint(a.pretrained);
    if (!(FeatureConfigFromMetadata(ckpt.metadata) == cfg.features)) {
      throw ConfigError("--pretrained was trained on different features");
    }
    pretrained.emplace(ModelGraph::FromCheckpoint(ckpt));
    cfg.model = pretrained->config();
  }

  const std::vector<LoadedUtterance> utts = LoadManifestAudio(a.manifest);
  const DomainData data = BuildDomainData(utts, cfg.features, cfg.model.kind);
  TrainResult result = Train(cfg, data, pretrained ? &*pretrained : nullptr);

  fs::create_directories(a.out);
  const std::string ckpt_path = (fs::path(a.out) / "model.davc").string();
  const std::string metrics_path = (fs::path(a.out) / "metrics.csv").string();
  nn::SaveCheckpoint(ckpt_path, result.model.ToCheckpoint(cfg.ToMetadata()));
  WriteMetricsCsv(metrics_path, result.log);
  const EpochLog& last = result.log.empty() ? EpochLog{} : result.log.back();
  std::cout << "checkpoint: " << ckpt_path << " (" << HexDigest(HashFile(ckpt_path))
            << ")\n"
            << "metrics: " << metrics_path << '\n'
            << "final_label_loss: " << last.label_loss << '\n'
            << "target_label_reads: " << result.target_label_reads << '\n';
  return kOk;
}

// eval --------------------------------------------------------------------------

struct EvalArgs {
  std::string checkpoint;
  std::string manifest;
  std::string subset = "target_test";
  std::string out;
  FeatureFlags features;
};

int EvalCmd(const EvalArgs& a) {
  const nn::Checkpoint ckpt = nn::LoadCheckpoint(a.checkpoint);
  const FeatureConfig f = FeatureConfigFromMetadata(ckpt.metadata);
  if (a.features.AnySet()) {
    FeatureConfig requested = f;
    a.features.ApplyTo(requested);
    if (!(requested == f)) {
      throw ConfigError("checkpoint was trained on " + f.Tag() + ", not " +
                        requested.Tag());
    }
  }
  const Subset subset = ParseSubset(a.subset);
  auto meta = FeatureMeta(f);
  meta["checkpoint"] = a.checkpoint;
  meta["manifest"] = a.manifest;
  meta["subset"] = a.subset;
  meta["out"] = a.out;
  EchoConfig("eval", meta);

  ModelGraph model = ModelGraph::FromCheckpoint(ckpt);
  const std::vector<LoadedUtterance> utts = LoadManifestAudio(a.manifest);
  const DomainData data = BuildDomainData(utts, f, model.config().kind);
  const std::vector<Sample>& samples = SubsetSamples(data, subset);
  if (samples.empty()) throw DataError("subset " + a.subset + " is empty");

  const std::vector<double> scores = ScoreSamples(model, samples);
  std::vector<int> labels;
  for (const Sample& s : samples) labels.push_back(*s.label == Label::kPathological);
  const PrCurve curve = ComputePrCurve(scores, labels);

  fs::create_directories(a.out);
  const std::string scores_path = (fs::path(a.out) / "scores.csv").string();
  const std::string curve_path = (fs::path(a.out) / "pr_curve.csv").string();
  std::ofstream out(scores_path);
  if (!out) throw DataError("cannot write " + scores_path);
  out.precision(10);
  out << "utterance_id,score,label,device\n";
  for (size_t i = 0; i < samples.size(); ++i) {
    out << samples[i].id << ',' << scores[i] << ',' << LabelName(*samples[i].label)
        << ',' << DeviceName(samples[i].device) << '\n';
  }
  WritePrCurveCsv(curve_path, curve);
  std::cout << "subset: " << a.subset << " (" << curve.n_positive << " pathological, "
            << curve.n_negative << " control)\n"
            << "pr_auc: " << curve.auc << '\n'
            << "scores: " << scores_path << '\n'
            << "curve: " << curve_path << '\n';
  return kOk;
}

// matrix ------------------------------------------------------------------------

struct MatrixArgs {
  std::string kind = "regimes";
  std::string manifest;
  std::string scale = "desk";
  std::string seeds = "1,2,3";
  std::string models = "blstm";
  std::string regimes = "all";
  std::string lambda;
  CLI::Option* lambda_opt = nullptr;
  std::string out;
  uint64_t corpus_seed = 1;
  int jobs = 1;
  int epochs = 0;
  CLI::Option* epochs_opt = nullptr;
  FeatureFlags features;
};

int MatrixCmd(const MatrixArgs& a) {
  const ScalePreset preset = GetScalePreset(a.scale);
  const std::vector<uint64_t> seeds = ParseSeedList(a.seeds);
  std::vector<ModelKind> models;
  {
    std::stringstream ss(a.models);
    std::string item;
    while (std::getline(ss, item, ',')) models.push_back(ParseModelKind(item));
  }
  if (models.empty()) throw ConfigError("empty model list");

  std::map<std::string, std::string> meta{{"kind", a.kind},
                                          {"manifest", a.manifest},
                                          {"scale", a.scale},
                                          {"seeds", a.seeds},
                                          {"models", a.models},
                                          {"regimes", a.regimes},
                                          {"jobs", std::to_string(a.jobs)},
                                          {"out", a.out}};
  if (a.manifest.empty()) meta["corpus_seed"] = std::to_string(a.corpus_seed);
  const int epochs = a.epochs_opt->count() ? a.epochs : preset.epochs;
  meta["epochs"] = std::to_string(epochs);

  if (a.kind == "regimes") {
    FeatureConfig f;
    a.features.ApplyTo(f);
    RegimeMatrixOptions opt;
    opt.base = MakeTrainConfig(preset, f, models.front());
    opt.base.epochs = epochs;
    if (a.lambda_opt->count()) opt.base.lambda = LambdaSchedule::Parse(a.lambda);
    meta["lambda"] = opt.base.lambda.ToString();
    opt.frozen_epochs = a.epochs_opt->count() ? a.epochs : preset.frozen_epochs;
    opt.seeds = seeds;
    opt.jobs = a.jobs;
    if (a.regimes != "all") {
      opt.regimes.clear();
      std::stringstream ss(a.regimes);
      std::string item;
      while (std::getline(ss, item, ',')) opt.regimes.push_back(ParseRegime(item));
    }
    for (const auto& [k, v] : opt.base.ToMetadata()) {
      if (k != "train.regime" && k != "train.seed") meta[k] = v;
    }
    EchoConfig("matrix", meta);
    const auto utts = CorpusFromFlags(a.manifest, a.scale, a.corpus_seed);
    const DomainData data = BuildDomainData(utts, f, models.front());
    const RegimeMatrixReport report = RunRegimeMatrix(data, opt);
    std::cout << FormatRegimeMatrix(report);
    if (!a.out.empty()) WriteRegimeMatrixCsv(a.out, report);
  } else if (a.kind == "features") {
    FeatureMatrixOptions opt;
    opt.base = MakeTrainConfig(preset, FeatureConfig{}, models.front());
    opt.base.epochs = epochs;
    opt.models = models;
    opt.seeds = seeds;
    opt.jobs = a.jobs;
    EchoConfig("matrix", meta);
    const auto utts = CorpusFromFlags(a.manifest, a.scale, a.corpus_seed);
    const FeatureMatrixReport report = RunFeatureMatrix(utts, opt);
    std::cout << FormatFeatureMatrix(report);
    if (!a.out.empty()) WriteFeatureMatrixCsv(a.out, report);
  } else {
    throw ConfigError("--kind must be regimes or features");
  }
  if (!a.out.empty()) std::cout << "csv: " << a.out << '\n';
  return kOk;
}

// gradcheck ----------------------------------------------------------------------

struct GradcheckArgs {
  std::string component = "all";
  double eps = 1e-5;
  double threshold = 1e-4;
  uint64_t seed = 7;
};

int GradcheckCmd(const GradcheckArgs& a) {
  EchoConfig("gradcheck", {{"component", a.component},
                           {"eps", std::to_string(a.eps)},
                           {"threshold", std::to_string(a.threshold)},
                           {"seed", std::to_string(a.seed)}});
  std::vector<std::string> components = GradCheckComponents();
  if (a.component != "all") components = {a.component};
  bool breach = false;
  for (const std::string& c : components) {
    const ComponentCheck r = CheckComponent(c, a.eps, a.seed);
    const bool ok = std::isfinite(r.result.max_relative_error) &&
                    r.result.max_relative_error < a.threshold;
    breach |= !ok;
    std::cout << (ok ? "ok    " : "FAIL  ") << c << "  max_rel_err=" << r.result.max_relative_error
              << "  entries=" << r.result.entries_checked;
    if (!r.result.worst_param.empty()) std::cout << "  worst=" << r.result.worst_param;
    if (c == "grl") std::cout << "  forward_deviation=" << r.forward_deviation;
    std::cout << '\n';
  }
  return breach ? kThresholdExit : kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Channel-robust pathological voice detection toolkit"};
  app.require_subcommand(1);

  GenCorpusArgs gen;
  auto* gen_cmd = app.add_subcommand("gen-corpus", "synthesize the two-device corpus");
  gen_cmd->add_option("--out", gen.out, "output directory")->required();
  gen_cmd->add_option("--scale", gen.scale, "paper, desk or ci")->capture_default_str();
  gen.seed_opt = gen_cmd->add_option("--seed", gen.seed, "corpus seed")->capture_default_str();
  gen_cmd->add_flag("!--no-self-test", gen.self_test, "skip the probe self-test");

  ExtractArgs ext;
  auto* ext_cmd = app.add_subcommand("extract-features", "write feature caches");
  ext_cmd->add_option("--manifest", ext.manifest, "corpus manifest");
  ext_cmd->add_option("--wav", ext.wav, "single WAV file");
  ext_cmd->add_option("--out", ext.out, "output directory (or file with --wav)")->required();
  ext_cmd->add_flag("--stack", ext.stack, "apply context stacking");
  ext.features.Add(ext_cmd);

  TrainArgs tr;
  auto* tr_cmd = app.add_subcommand("train", "train one regime");
  tr_cmd->add_option("--manifest", tr.manifest, "corpus manifest")->required();
  tr_cmd->add_option("--out", tr.out, "run directory")->required();
  tr_cmd->add_option("--config", tr.config_file, "key = value config file");
  tr.regime_opt = tr_cmd->add_option("--regime", tr.regime,
                                     "source-only, target-only, frozen-finetune, dat-sup, dat-unsup")
                      ->capture_default_str();
  tr.lambda_opt = tr_cmd->add_option("--lambda", tr.lambda,
                                     "constant:L, ramp:L or a number (default: preset)");
  tr_cmd->add_option("--scale", tr.scale, "paper, desk or ci")->capture_default_str();
  tr.model_opt = tr_cmd->add_option("--model", tr.model, "blstm or mlp")->capture_default_str();
  tr_cmd->add_option("--pretrained", tr.pretrained, "source-only checkpoint for frozen-finetune");
  tr.seed_opt = tr_cmd->add_option("--seed", tr.seed, "run seed (fallback: DAVOC_SEED)")
                    ->capture_default_str();
  tr.epochs_opt = tr_cmd->add_option("--epochs", tr.epochs, "override the preset epochs");
  tr.features.Add(tr_cmd);

  EvalArgs ev;
  auto* ev_cmd = app.add_subcommand("eval", "score a subset and compute PR-AUC");
  ev_cmd->add_option("--checkpoint", ev.checkpoint, "model checkpoint")->required();
  ev_cmd->add_option("--manifest", ev.manifest, "corpus manifest")->required();
  ev_cmd->add_option("--subset", ev.subset, "subset to score")->capture_default_str();
  ev_cmd->add_option("--out", ev.out, "output directory")->required();
  ev.features.Add(ev_cmd);

  MatrixArgs mx;
  auto* mx_cmd = app.add_subcommand("matrix", "regime or feature experiment matrix");
  mx_cmd->add_option("--kind", mx.kind, "regimes or features")->capture_default_str();
  mx_cmd->add_option("--manifest", mx.manifest, "corpus manifest (default: generate)");
  mx_cmd->add_option("--scale", mx.scale, "paper, desk or ci")->capture_default_str();
  mx_cmd->add_option("--corpus-seed", mx.corpus_seed, "seed for a generated corpus")
      ->capture_default_str();
  mx_cmd->add_option("--seeds", mx.seeds, "comma-separated run seeds")->capture_default_str();
  mx_cmd->add_option("--models", mx.models, "comma-separated: blstm, mlp")->capture_default_str();
  mx_cmd->add_option("--regimes", mx.regimes, "comma-separated regimes or all")
      ->capture_default_str();
  mx.lambda_opt = mx_cmd->add_option("--lambda", mx.lambda,
                                     "adversarial weight schedule (default: preset)");
  mx_cmd->add_option("--jobs", mx.jobs, "parallel jobs")->capture_default_str();
  mx.epochs_opt = mx_cmd->add_option("--epochs", mx.epochs, "override the preset epochs");
  mx_cmd->add_option("--out", mx.out, "CSV report path");
  mx.features.Add(mx_cmd);

  GradcheckArgs gc;
  auto* gc_cmd = app.add_subcommand("gradcheck", "finite-difference gradient check");
  gc_cmd->add_option("--component", gc.component, "component name or all")->capture_default_str();
  gc_cmd->add_option("--eps", gc.eps, "central-difference step")->capture_default_str();
  gc_cmd->add_option("--threshold", gc.threshold, "max relative error")->capture_default_str();
  gc_cmd->add_option("--seed", gc.seed, "init seed")->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kConfigExit;
  }

  try {
    if (*gen_cmd) return GenCorpus(gen);
    if (*ext_cmd) return ExtractFeaturesCmd(ext);
    if (*tr_cmd) return TrainCmd(tr);
    if (*ev_cmd) return EvalCmd(ev);
    if (*mx_cmd) return MatrixCmd(mx);
    if (*gc_cmd) return GradcheckCmd(gc);
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    switch (e.kind()) {
      case ErrorKind::kConfig: return kConfigExit;
      case ErrorKind::kData: return kDataExit;
      case ErrorKind::kNumeric: return kNumericExit;
      case ErrorKind::kThreshold: return kThresholdExit;
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kDataExit;
  }
  return kOk;
}
