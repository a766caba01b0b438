#include <atomic>
#include <cmath>
#include <fstream>
#include <limits>
#include <set>
#include <string>
#include <vector>

#include "davoc/adapt/dataset.h"
#include "davoc/adapt/experiment.h"
#include "davoc/adapt/lambda_schedule.h"
#include "davoc/adapt/presets.h"
#include "davoc/adapt/trainer.h"
#include "davoc/common/error.h"
#include "davoc/synth/corpus.h"
#include "doctest.h"
#include "test_util.h"

using namespace davoc;

namespace {

const Corpus& CiCorpus() {
  static const Corpus corpus = GenerateCorpus(CorpusSpec::CiScale(), 5);
  return corpus;
}

const DomainData& CiData(ModelKind kind) {
  static const DomainData blstm =
      BuildDomainData(CiCorpus(), FeatureConfig{}, ModelKind::kBlstm);
  static const DomainData mlp = BuildDomainData(CiCorpus(), FeatureConfig{}, ModelKind::kMlp);
  return kind == ModelKind::kBlstm ? blstm : mlp;
}

TrainConfig CiConfig(ModelKind kind, Regime regime) {
  TrainConfig c = MakeTrainConfig(GetScalePreset("ci"), FeatureConfig{}, kind);
  c.regime = regime;
  c.epochs = 2;
  c.batch_size = 4;
  return c;
}

bool SameLogs(const std::vector<EpochLog>& a, const std::vector<EpochLog>& b) {
  if (a.size() != b.size()) return false;
  for (size_t i = 0; i < a.size(); ++i) {
    if (a[i].label_loss != b[i].label_loss) return false;
    if (!(a[i].train_pr_auc == b[i].train_pr_auc ||
          (std::isnan(a[i].train_pr_auc) && std::isnan(b[i].train_pr_auc)))) {
      return false;
    }
  }
  return true;
}

}  // namespace

TEST_CASE("lambda schedules") {
  LambdaSchedule c = LambdaSchedule::Parse("constant:0.7");
  CHECK(c.At(0.0) == 0.7);
  CHECK(c.At(0.5) == 0.7);
  CHECK(c.At(1.0) == 0.7);
  const LambdaSchedule r = LambdaSchedule::Parse("ramp:2");
  CHECK(r.At(0.0) == 0.0);
  CHECK(r.At(1.0) == doctest::Approx(2.0 * (2.0 / (1.0 + std::exp(-10.0)) - 1.0)).epsilon(1e-15));
  CHECK(r.At(0.3) == doctest::Approx(2.0 * (2.0 / (1.0 + std::exp(-3.0)) - 1.0)));
  CHECK(r.At(5.0) == r.At(1.0));
  CHECK(r.At(-1.0) == 0.0);
  double prev = -1.0;
  for (int k = 0; k <= 100; ++k) {
    const double v = r.At(k / 100.0);
    CHECK(v >= prev);
    prev = v;
  }
  CHECK(LambdaSchedule::Parse("0.25").At(0.9) == 0.25);
  CHECK(LambdaSchedule::Parse(r.ToString()).At(0.4) == r.At(0.4));
  CHECK_THROWS_AS(LambdaSchedule::Parse("ramp:-1"), Error);
  CHECK_THROWS_AS(LambdaSchedule::Parse("cosine:1"), Error);
  CHECK_THROWS_AS(LambdaSchedule::Parse("abc"), Error);
}

TEST_CASE("regime names round trip") {
  for (Regime r : {Regime::kSourceOnly, Regime::kTargetOnly, Regime::kFrozenFineTune,
                   Regime::kDatSupervised, Regime::kDatUnsupervised}) {
    CHECK(ParseRegime(RegimeName(r)) == r);
  }
  CHECK_THROWS_AS(ParseRegime("dann"), Error);
}

TEST_CASE("domain data from the ci corpus") {
  const DomainData& d = CiData(ModelKind::kBlstm);
  CHECK(d.source_train.size() == 16);
  CHECK(d.source_test.size() == 4);
  CHECK(d.target_adapt.size() == 5);
  CHECK(d.target_test.size() == 5);
  for (const Sample& s : d.source_train) {
    CHECK(s.device == Device::kSource);
    CHECK(s.features.cols() == 440);
  }
  for (const Sample& s : d.target_adapt) CHECK(s.device == Device::kTarget);
  CHECK(CiData(ModelKind::kMlp).source_train[0].features.cols() == 40);
  FeatureConfig mfcc;
  mfcc.kind = FeatureKind::kMfcc;
  CHECK(ModelInputDim(mfcc, ModelKind::kBlstm) == 286);
  CHECK(ModelInputDim(mfcc, ModelKind::kMlp) == 26);
}

TEST_CASE("lambda zero DAT is bit-identical to source-only") {
  for (ModelKind kind : {ModelKind::kBlstm, ModelKind::kMlp}) {
    const DomainData& d = CiData(kind);
    TrainConfig base = CiConfig(kind, Regime::kSourceOnly);
    const TrainResult src = TrainSourceOnly(base, d.source_train);
    for (Regime r : {Regime::kDatUnsupervised}) {
      TrainConfig dat = base;
      dat.regime = r;
      dat.lambda = LambdaSchedule{LambdaSchedule::Kind::kConstant, 0.0};
      TrainResult res = TrainDat(dat, d.source_train, d.target_adapt);
      CHECK(nn::Checksum(res.model.DetectorParams()) ==
            nn::Checksum(const_cast<ModelGraph&>(src.model).DetectorParams()));
      CHECK(SameLogs(res.log, src.log));
    }
  }
}

TEST_CASE("zero-epoch frozen fine-tune is bit-identical to its baseline") {
  const DomainData& d = CiData(ModelKind::kBlstm);
  TrainConfig base = CiConfig(ModelKind::kBlstm, Regime::kSourceOnly);
  TrainResult src = TrainSourceOnly(base, d.source_train);
  TrainConfig frozen = base;
  frozen.regime = Regime::kFrozenFineTune;
  frozen.epochs = 0;
  TrainResult res = TrainFrozenFineTune(frozen, src.model, d.target_adapt);
  CHECK(nn::Checksum(res.model.StateParams()) == nn::Checksum(src.model.StateParams()));
  CHECK(ScoreSamples(res.model, d.target_test) == ScoreSamples(src.model, d.target_test));
}

TEST_CASE("frozen fine-tune changes only the predictor") {
  const DomainData& d = CiData(ModelKind::kBlstm);
  TrainConfig base = CiConfig(ModelKind::kBlstm, Regime::kSourceOnly);
  TrainResult src = TrainSourceOnly(base, d.source_train);
  TrainConfig frozen = base;
  frozen.regime = Regime::kFrozenFineTune;
  frozen.epochs = 3;
  TrainResult res = TrainFrozenFineTune(frozen, src.model, d.target_adapt);
  CHECK(nn::Checksum(res.model.EncoderParams()) == nn::Checksum(src.model.EncoderParams()));
  CHECK(nn::Checksum(res.model.PredictorParams()) != nn::Checksum(src.model.PredictorParams()));
  // One pass for the two-class check, then one read per utterance and epoch.
  CHECK(res.target_label_reads == 4 * static_cast<int64_t>(d.target_adapt.size()));

  TrainConfig other = frozen;
  other.model.lstm_units = 5;
  CHECK_THROWS_AS(TrainFrozenFineTune(other, src.model, d.target_adapt), Error);
}

TEST_CASE("unsupervised DAT never reads a target label") {
  const DomainData& d = CiData(ModelKind::kMlp);
  TrainConfig c = CiConfig(ModelKind::kMlp, Regime::kDatUnsupervised);
  const TrainResult unsup = TrainDat(c, d.source_train, d.target_adapt);
  CHECK(unsup.target_label_reads == 0);
  for (const EpochLog& e : unsup.log) CHECK(std::isfinite(e.device_loss));

  // Unsupervised DAT must not depend on the target labels at all.
  std::vector<Sample> flipped(d.target_adapt.begin(), d.target_adapt.end());
  for (Sample& s : flipped) {
    s.label = *s.label == Label::kPathological ? Label::kControl : Label::kPathological;
  }
  TrainResult again = TrainDat(c, d.source_train, flipped);
  CHECK(nn::Checksum(again.model.AllParams()) ==
        nn::Checksum(const_cast<ModelGraph&>(unsup.model).AllParams()));

  c.regime = Regime::kDatSupervised;
  const TrainResult sup = TrainDat(c, d.source_train, d.target_adapt);
  CHECK(sup.target_label_reads > 0);
}

TEST_CASE("label access counts reads and refuses erased labels") {
  const DomainData& d = CiData(ModelKind::kMlp);
  LabelAccess access;
  access.Read(d.source_train[0]);
  access.Read(d.target_adapt[0]);
  access.Read(d.target_adapt[1]);
  CHECK(access.source_reads() == 1);
  CHECK(access.target_reads() == 2);
  const std::vector<Sample> erased = EraseLabels(d.target_adapt);
  CHECK(erased.size() == d.target_adapt.size());
  for (const Sample& s : erased) CHECK_FALSE(s.label.has_value());
  CHECK_THROWS_AS(access.Read(erased[0]), Error);
  // Attempts count too.
  CHECK(access.target_reads() == 3);
}

TEST_CASE("regime preconditions") {
  const DomainData& d = CiData(ModelKind::kMlp);
  TrainConfig c = CiConfig(ModelKind::kMlp, Regime::kDatUnsupervised);
  CHECK_THROWS_AS(TrainDat(c, d.source_train, {}), Error);
  // Source utterances in the target pool.
  CHECK_THROWS_AS(TrainDat(c, d.source_train, d.source_test), Error);

  std::vector<Sample> one_class;
  for (const Sample& s : d.target_adapt) {
    if (s.label == Label::kPathological) one_class.push_back(s);
  }
  REQUIRE_FALSE(one_class.empty());
  c.regime = Regime::kTargetOnly;
  try {
    TrainTargetOnly(c, one_class);
    FAIL("expected DataError");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::kData);
  }
  c.regime = Regime::kFrozenFineTune;
  CHECK_THROWS_AS(Train(c, d, nullptr), Error);

  TrainConfig bad = CiConfig(ModelKind::kMlp, Regime::kSourceOnly);
  bad.epochs = 0;
  CHECK_THROWS_AS(bad.Validate(), Error);
  bad = CiConfig(ModelKind::kMlp, Regime::kSourceOnly);
  bad.learning_rate = -1.0;
  CHECK_THROWS_AS(bad.Validate(), Error);
}

TEST_CASE("non-finite inputs surface as a numeric error") {
  const DomainData& d = CiData(ModelKind::kMlp);
  std::vector<Sample> poisoned(d.source_train.begin(), d.source_train.end());
  poisoned[3].features(2, 2) = std::numeric_limits<double>::infinity();
  TrainConfig c = CiConfig(ModelKind::kMlp, Regime::kSourceOnly);
  try {
    TrainSourceOnly(c, poisoned);
    FAIL("expected NumericError");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::kNumeric);
  }
}

TEST_CASE("training is deterministic in the seed") {
  const DomainData& d = CiData(ModelKind::kMlp);
  TrainConfig c = CiConfig(ModelKind::kMlp, Regime::kDatSupervised);
  TrainResult a = TrainDat(c, d.source_train, d.target_adapt);
  TrainResult b = TrainDat(c, d.source_train, d.target_adapt);
  CHECK(nn::Checksum(a.model.AllParams()) == nn::Checksum(b.model.AllParams()));
  c.seed = 2;
  TrainResult other = TrainDat(c, d.source_train, d.target_adapt);
  CHECK(nn::Checksum(a.model.AllParams()) != nn::Checksum(other.model.AllParams()));
}

TEST_CASE("source-only training fits the source data") {
  const DomainData& d = CiData(ModelKind::kMlp);
  TrainConfig c = CiConfig(ModelKind::kMlp, Regime::kSourceOnly);
  c.epochs = 15;
  TrainResult r = TrainSourceOnly(c, d.source_train);
  CHECK(r.log.size() == 15);
  CHECK(r.log.back().label_loss < r.log.front().label_loss);
  CHECK(std::isnan(r.log.front().device_loss));
  CHECK(EvaluatePrAuc(r.model, d.source_train) > 0.9);
}

TEST_CASE("metrics csv") {
  davoc::testing::TempDir dir;
  std::vector<EpochLog> log(2);
  log[0] = {1, 0.5, std::nan(""), 0.0, 0.75};
  log[1] = {2, 0.25, 0.6, 1.0, 1.0};
  WriteMetricsCsv(dir.File("m.csv"), log);
  std::ifstream in(dir.File("m.csv"));
  std::string header;
  std::getline(in, header);
  CHECK(header == "epoch,label_loss,device_loss,lambda,train_pr_auc");
  int rows = 0;
  for (std::string line; std::getline(in, line);) ++rows;
  CHECK(rows == 2);
}

TEST_CASE("split files round trip and reject overlaps") {
  davoc::testing::TempDir dir;
  const DomainData& d = CiData(ModelKind::kMlp);
  const DomainSplit split = SplitOf(d);
  WriteSplitFile(dir.File("split.txt"), split);
  const DomainSplit back = ReadSplitFile(dir.File("split.txt"));
  CHECK(back.source_train == split.source_train);
  CHECK(back.target_test == split.target_test);

  DomainSplit moved = split;
  moved.target_adapt.push_back(moved.target_test.back());
  moved.target_test.pop_back();
  const DomainData re = ApplySplit(d, moved);
  CHECK(re.target_adapt.size() == d.target_adapt.size() + 1);
  CHECK(re.target_test.size() == d.target_test.size() - 1);

  moved.source_test.push_back(moved.source_train[0]);
  CHECK_THROWS_AS(moved.Validate(), Error);
}

TEST_CASE("parallel-for covers every index once, for any job count") {
  for (int jobs : {1, 3, 8}) {
    std::vector<std::atomic<int>> hits(37);
    ParallelFor(hits.size(), jobs, [&](size_t i) { hits[i]++; });
    for (auto& h : hits) CHECK(h.load() == 1);
  }
}

TEST_CASE("regime matrix results do not depend on the job count") {
  const DomainData& d = CiData(ModelKind::kMlp);
  RegimeMatrixOptions opt;
  opt.base = CiConfig(ModelKind::kMlp, Regime::kSourceOnly);
  opt.frozen_epochs = 2;
  opt.seeds = {1, 2};
  opt.jobs = 1;
  const RegimeMatrixReport serial = RunRegimeMatrix(d, opt);
  opt.jobs = 2;
  const RegimeMatrixReport parallel = RunRegimeMatrix(d, opt);
  REQUIRE(serial.rows.size() == 5);
  for (size_t i = 0; i < serial.rows.size(); ++i) {
    CHECK(serial.rows[i].target_pr_auc == parallel.rows[i].target_pr_auc);
    for (const std::string& e : serial.rows[i].errors) CHECK(e.empty());
  }
  CHECK(serial.Find(Regime::kDatUnsupervised)->target_label_reads ==
        std::vector<int64_t>{0, 0});
  CHECK(serial.dat_unsup_vs_source_only.has_value());
  const std::string table = FormatRegimeMatrix(serial);
  CHECK(table.find("dat-unsup") != std::string::npos);
  CHECK(table.find("welch") != std::string::npos);
}

TEST_CASE("regime matrix records per-cell failures") {
  DomainData d = CiData(ModelKind::kMlp);
  d.target_adapt.clear();
  RegimeMatrixOptions opt;
  opt.base = CiConfig(ModelKind::kMlp, Regime::kSourceOnly);
  opt.seeds = {1};
  opt.regimes = {Regime::kSourceOnly, Regime::kDatUnsupervised};
  const RegimeMatrixReport r = RunRegimeMatrix(d, opt);
  CHECK(r.Find(Regime::kSourceOnly)->errors[0].empty());
  CHECK_FALSE(r.Find(Regime::kDatUnsupervised)->errors[0].empty());
  CHECK(std::isnan(r.Find(Regime::kDatUnsupervised)->target_pr_auc[0]));
}

TEST_CASE("feature matrix has eight cells with stacked widths 286 and 440") {
  const std::vector<LoadedUtterance> utts = RecordedUtterances(CiCorpus());
  FeatureMatrixOptions opt;
  opt.base = CiConfig(ModelKind::kBlstm, Regime::kSourceOnly);
  opt.base.epochs = 1;
  opt.seeds = {1};
  const FeatureMatrixReport r = RunFeatureMatrix(utts, opt);
  REQUIRE(r.cells.size() == 8);
  std::set<std::string> tags;
  for (const FeatureCell& c : r.cells) {
    tags.insert(c.key.Tag());
    CHECK(c.input_dim == (c.key.kind == FeatureKind::kMfcc ? 286 : 440));
    CHECK(c.errors[0].empty());
    CHECK(std::isfinite(c.summary.mean));
  }
  CHECK(tags.size() == 8);
}

TEST_CASE("key/value overrides") {
  TrainConfig c = CiConfig(ModelKind::kBlstm, Regime::kSourceOnly);
  ApplyKeyValues({{"regime", "dat-unsup"},
                  {"lambda", "ramp:0.5"},
                  {"features.kind", "mfcc"},
                  {"model.lstm_units", "12"},
                  {"device_lr_scale", "4"},
                  {"anneal_lr", "true"}},
                 c);
  CHECK(c.regime == Regime::kDatUnsupervised);
  CHECK(c.lambda.kind == LambdaSchedule::Kind::kRamp);
  CHECK(c.model.input_dim == 286);
  CHECK(c.model.lstm_units == 12);
  CHECK(c.device_lr_scale == 4.0);
  CHECK(c.anneal_lr);
  CHECK_THROWS_AS(ApplyKeyValues({{"learning_rat", "1"}}, c), Error);
  CHECK_THROWS_AS(ApplyKeyValues({{"epochs", "ten"}}, c), Error);
  CHECK_THROWS_AS(ApplyKeyValues({{"features.normalized", "maybe"}}, c), Error);

  const FeatureConfig f = FeatureConfigFromMetadata(c.ToMetadata());
  CHECK(f.kind == FeatureKind::kMfcc);
  CHECK(f.Tag() == c.features.Tag());
  CHECK_THROWS_AS(GetScalePreset("huge"), Error);

  const TrainConfig desk = MakeTrainConfig(GetScalePreset("desk"), FeatureConfig{}, ModelKind::kBlstm);
  CHECK(desk.lambda.kind == LambdaSchedule::Kind::kConstant);
  CHECK(desk.lambda.lambda0 == 0.3);
  CHECK(MakeTrainConfig(GetScalePreset("paper"), FeatureConfig{}, ModelKind::kBlstm).lambda.lambda0 == 1.0);
}
