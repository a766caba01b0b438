#ifndef DAVOC_MODELS_MODEL_GRAPH_H_
#define DAVOC_MODELS_MODEL_GRAPH_H_

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "davoc/common/matrix.h"
#include "davoc/nn/checkpoint.h"
#include "davoc/nn/layers.h"
#include "davoc/nn/lstm.h"
#include "davoc/nn/param.h"

namespace davoc {

enum class ModelKind { kBlstm, kMlp };

std::string ModelKindName(ModelKind kind);
ModelKind ParseModelKind(const std::string& s);

struct ModelConfig {
  ModelKind kind = ModelKind::kBlstm;
  // Context-stacked feature width for the BLSTM, raw per-frame width for the
  // MLP.
  int input_dim = 440;
  int dense_units = 64;  // BLSTM input projection
  int lstm_units = 64;   // per direction
  int lstm_layers = 2;
  int mlp_units = 300;
  int mlp_layers = 3;
  int device_units = 300;
  int device_layers = 3;
  int num_classes = 2;
  int num_devices = 2;

  // Width of z, the vector handed to the device classifier.
  int EmbeddingDim() const;
  void Validate() const;

  // Full size: 512-unit dense and BLSTM layers, 300-unit MLP and device
  // layers.
  static ModelConfig FullScale(ModelKind kind, int input_dim);

  bool operator==(const ModelConfig&) const = default;
};

// Relative weights of the two loss terms in one accumulated gradient.
struct LossWeights {
  double label = 1.0;
  double device = 1.0;
};

struct SampleLosses {
  std::optional<double> label_loss;
  std::optional<double> device_loss;
  double score = 0.0;  // P(pathological)
};

// Encoder -> label predictor, plus the GRL-fronted device classifier on the
// pooled embedding z.
//
// BLSTM: dense+ReLU -> BiLSTM x L -> mean over time -> z (one row)
//        label predictor: dense(z) -> 2 logits
// MLP:   (dense+ReLU) x L per frame -> hidden rows; z = mean of rows
//        label predictor: dense per frame; utterance score is the mean
//        of the frame posteriors, label loss the mean frame loss
// Device: GRL -> (dense+ReLU) x device_layers -> dense -> device logits
class ModelGraph {
 public:
  explicit ModelGraph(const ModelConfig& config);

  // Detector weights and device-head weights come from separate streams
  // derived from the seed, so a build without a device head initializes
  // the detector identically.
  void Initialize(uint64_t seed);

  const ModelConfig& config() const { return config_; }

  // Encoder output: one row (BLSTM) or one row per frame (MLP).
  Matrix EncodeHidden(const Matrix& features);
  RowVector Embed(const Matrix& features);
  double Score(const Matrix& features);
  // Pathological probability from an already computed EncodeHidden output.
  double ScoreFromHidden(const Matrix& hidden);
  RowVector DevicePosterior(const Matrix& features);

  // One utterance: forward, losses, and backward into the accumulated
  // gradients. The label term is skipped when `label` is empty and the
  // device term when `device` is empty. The device-loss gradient reaches
  // the encoder through the GRL, i.e. scaled by -lambda. With
  // train_encoder false the encoder backward pass is skipped.
  SampleLosses Accumulate(const Matrix& features, std::optional<int> label,
                          std::optional<int> device, double lambda,
                          const LossWeights& weights,
                          bool train_encoder = true);

  // Label loss and gradient for the predictor only, from a cached
  // EncodeHidden output.
  SampleLosses AccumulatePredictor(const Matrix& hidden, int label,
                                   double weight);

  // Same losses as Accumulate without touching gradients.
  SampleLosses Evaluate(const Matrix& features, std::optional<int> label,
                        std::optional<int> device);

  // Trains nothing; the GRL passes gradients through unchanged. Used to
  // verify the reversal numerically.
  void set_grl_identity(bool identity) { grl_.set_identity(identity); }

  nn::ParamList EncoderParams();
  nn::ParamList PredictorParams();
  nn::ParamList DetectorParams();  // encoder + predictor
  nn::ParamList DeviceParams();
  nn::ParamList AllParams();
  // AllParams plus the fixed input standardization; what checkpoints store.
  nn::ParamList StateParams();

  // Features enter the encoder as (x - mean) / stddev per column. The
  // statistics are fixed before training and never updated by it.
  void SetInputStandardization(const RowVector& mean, const RowVector& stddev);
  // Pools every row of every matrix; columns with stddev below 1e-8 are
  // only centered.
  void FitInputStandardization(const std::vector<const Matrix*>& inputs);
  const Matrix& input_mean() const { return input_mean_.value; }
  const Matrix& input_scale() const { return input_scale_.value; }

  void ZeroGrads();

  // Architecture goes into the checkpoint metadata under "model.*";
  // extra entries (feature config, regime, seed) are merged in.
  nn::Checkpoint ToCheckpoint(
      const std::map<std::string, std::string>& extra = {});
  static ModelGraph FromCheckpoint(const nn::Checkpoint& ckpt);

 private:
  struct Forward {
    Matrix hidden;
    Matrix label_logits;
    RowVector z;
  };

  Forward RunEncoderAndPredictor(const Matrix& features);
  Matrix RunEncoder(const Matrix& features);
  void BackwardEncoder(const Matrix& grad_hidden);
  RowVector RunDeviceHead(const RowVector& z);
  Matrix BackwardDeviceHead(const RowVector& grad_logits);

  ModelConfig config_;
  nn::Param input_mean_;
  nn::Param input_scale_;  // 1 / stddev
  // BLSTM encoder
  nn::Dense input_dense_;
  nn::Relu input_relu_;
  std::vector<nn::BiLstm> lstm_layers_;
  nn::MeanPoolTime pool_;
  // MLP encoder
  std::vector<nn::Dense> mlp_dense_;
  std::vector<nn::Relu> mlp_relu_;
  // Label predictor
  nn::Dense predictor_;
  // Device classifier
  nn::GradientReversal grl_;
  std::vector<nn::Dense> device_dense_;
  std::vector<nn::Relu> device_relu_;
  nn::Dense device_out_;
};

// Mean over rows of softmax(logits)[1].
double MeanPositivePosterior(const Matrix& logits);

}  // namespace davoc

#endif  // DAVOC_MODELS_MODEL_GRAPH_H_
