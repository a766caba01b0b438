#ifndef DAVOC_NN_LSTM_H_
#define DAVOC_NN_LSTM_H_

#include <string>
#include <vector>

#include "davoc/common/matrix.h"
#include "davoc/common/rng.h"
#include "davoc/nn/param.h"

namespace davoc::nn {

// Gate blocks inside the 4H pre-activation vector, in this order.
enum LstmGate { kInputGate = 0, kForgetGate = 1, kCellGate = 2, kOutputGate = 3 };

struct LstmStepResult {
  RowVector h;
  RowVector c;
  RowVector gates;  // activated i, f, g, o (1 x 4H)
};

// One time step:
//   [i f g o] = [sigm sigm tanh sigm](x W_in^T + h_prev W_rec^T + b)
//   c = f * c_prev + i * g,  h = o * tanh(c)
LstmStepResult LstmStep(const RowVector& x, const RowVector& h_prev,
                        const RowVector& c_prev, const Matrix& w_input,
                        const Matrix& w_recurrent, const RowVector& bias);

// Unidirectional LSTM over a whole sequence, trained by backprop through
// time. A reversed layer consumes the sequence from the last row to the first
// but returns outputs aligned with the input rows.
class Lstm {
 public:
  Lstm() = default;
  Lstm(const std::string& name, int in_dim, int hidden, bool reverse);

  // Glorot-uniform input and recurrent weights, zero bias except the forget
  // gate, which starts at 1.
  void Init(Rng& rng);
  Matrix Forward(const Matrix& x);  // T x H
  Matrix Backward(const Matrix& grad_h);
  ParamList Params() { return {&w_input_, &w_recurrent_, &bias_}; }

  int in_dim() const { return static_cast<int>(w_input_.value.cols()); }
  int hidden() const { return static_cast<int>(w_recurrent_.value.cols()); }
  bool reverse() const { return reverse_; }

 private:
  Param w_input_;      // 4H x in
  Param w_recurrent_;  // 4H x H
  Param bias_;         // 1 x 4H
  bool reverse_ = false;

  // Caches, indexed by input row.
  Matrix input_;
  Matrix gates_;  // T x 4H activated
  Matrix cells_;  // T x H
  Matrix hidden_;  // T x H
};

// Forward and time-reversed LSTMs over the same input, outputs concatenated
// per step as [forward | backward].
class BiLstm {
 public:
  BiLstm() = default;
  BiLstm(const std::string& name, int in_dim, int hidden);

  void Init(Rng& rng);
  Matrix Forward(const Matrix& x);  // T x 2H
  Matrix Backward(const Matrix& grad_out);
  ParamList Params();

  int hidden() const { return forward_.hidden(); }
  int out_dim() const { return 2 * forward_.hidden(); }

 private:
  Lstm forward_;
  Lstm backward_;
};

}  // namespace davoc::nn

#endif  // DAVOC_NN_LSTM_H_
