#include "davoc/nn/lstm.h"

#include <cmath>

#include "davoc/common/error.h"

namespace davoc::nn {
namespace {

using RowArray = Eigen::Array<double, 1, Eigen::Dynamic>;

double Sigmoid(double x) { return 1.0 / (1.0 + std::exp(-x)); }

// Applies the gate nonlinearities in place to a 1 x 4H pre-activation.
template <typename Row>
void ActivateGates(Row&& a, int hidden) {
  for (int j = 0; j < 4 * hidden; ++j) {
    a[j] = (j / hidden == kCellGate) ? std::tanh(a[j]) : Sigmoid(a[j]);
  }
}

}  // namespace

LstmStepResult LstmStep(const RowVector& x, const RowVector& h_prev,
                        const RowVector& c_prev, const Matrix& w_input,
                        const Matrix& w_recurrent, const RowVector& bias) {
  const int hidden = static_cast<int>(w_recurrent.cols());
  if (w_input.rows() != 4 * hidden || w_recurrent.rows() != 4 * hidden ||
      bias.size() != 4 * hidden || x.size() != w_input.cols() ||
      h_prev.size() != hidden || c_prev.size() != hidden) {
    throw ConfigError("LSTM step shape mismatch");
  }
  LstmStepResult r;
  r.gates = x * w_input.transpose() + h_prev * w_recurrent.transpose() + bias;
  ActivateGates(r.gates, hidden);
  const auto i = r.gates.segment(kInputGate * hidden, hidden).array();
  const auto f = r.gates.segment(kForgetGate * hidden, hidden).array();
  const auto g = r.gates.segment(kCellGate * hidden, hidden).array();
  const auto o = r.gates.segment(kOutputGate * hidden, hidden).array();
  r.c = (f * c_prev.array() + i * g).matrix();
  r.h = (o * r.c.array().tanh()).matrix();
  return r;
}

Lstm::Lstm(const std::string& name, int in_dim, int hidden, bool reverse)
    : w_input_(name + ".w_input", 4 * hidden, in_dim),
      w_recurrent_(name + ".w_recurrent", 4 * hidden, hidden),
      bias_(name + ".bias", 1, 4 * hidden),
      reverse_(reverse) {
  if (in_dim < 1 || hidden < 1) {
    throw ConfigError("LSTM " + name + " needs positive dims");
  }
}

void Lstm::Init(Rng& rng) {
  const int h = hidden();
  GlorotUniform(w_input_, in_dim(), 4 * h, rng);
  GlorotUniform(w_recurrent_, h, 4 * h, rng);
  bias_.value.setZero();
  bias_.value.block(0, kForgetGate * h, 1, h).setOnes();
}

Matrix Lstm::Forward(const Matrix& x) {
  if (x.rows() == 0) throw DataError("LSTM over an empty sequence");
  if (x.cols() != in_dim()) {
    throw ConfigError(w_input_.name + ": input has " +
                      std::to_string(x.cols()) + " columns, expected " +
                      std::to_string(in_dim()));
  }
  const Eigen::Index steps = x.rows();
  const int h = hidden();
  input_ = x;
  gates_ = x * w_input_.value.transpose();
  gates_.rowwise() += bias_.value.row(0);
  cells_.resize(steps, h);
  hidden_.resize(steps, h);

  RowVector h_prev = RowVector::Zero(h);
  RowVector c_prev = RowVector::Zero(h);
  for (Eigen::Index k = 0; k < steps; ++k) {
    const Eigen::Index t = reverse_ ? steps - 1 - k : k;
    auto a = gates_.row(t);
    a.noalias() += h_prev * w_recurrent_.value.transpose();
    ActivateGates(a, h);
    const auto i = a.segment(kInputGate * h, h).array();
    const auto f = a.segment(kForgetGate * h, h).array();
    const auto g = a.segment(kCellGate * h, h).array();
    const auto o = a.segment(kOutputGate * h, h).array();
    cells_.row(t) = (f * c_prev.array() + i * g).matrix();
    hidden_.row(t) = (o * cells_.row(t).array().tanh()).matrix();
    h_prev = hidden_.row(t);
    c_prev = cells_.row(t);
  }
  return hidden_;
}

Matrix Lstm::Backward(const Matrix& grad_h) {
  const Eigen::Index steps = input_.rows();
  const int h = hidden();
  if (grad_h.rows() != steps || grad_h.cols() != h) {
    throw ConfigError(w_input_.name + ": gradient shape mismatch");
  }
  Matrix grad_pre(steps, 4 * h);
  Matrix prev_hidden = Matrix::Zero(steps, h);
  RowVector dh_next = RowVector::Zero(h);
  RowVector dc_next = RowVector::Zero(h);

  for (Eigen::Index k = steps - 1; k >= 0; --k) {
    const Eigen::Index t = reverse_ ? steps - 1 - k : k;
    const bool first = (k == 0);
    const Eigen::Index prev = reverse_ ? t + 1 : t - 1;
    const RowVector c_prev = first ? RowVector::Zero(h) : RowVector(cells_.row(prev));
    if (!first) prev_hidden.row(t) = hidden_.row(prev);

    const auto gates = gates_.row(t);
    const auto i = gates.segment(kInputGate * h, h).array();
    const auto f = gates.segment(kForgetGate * h, h).array();
    const auto g = gates.segment(kCellGate * h, h).array();
    const auto o = gates.segment(kOutputGate * h, h).array();
    const RowArray tanh_c = cells_.row(t).array().tanh();

    const RowArray dh = grad_h.row(t).array() + dh_next.array();
    const RowArray dc =
        dh * o * (1.0 - tanh_c.square()) + dc_next.array();

    auto da = grad_pre.row(t);
    da.segment(kInputGate * h, h) = (dc * g * i * (1.0 - i)).matrix();
    da.segment(kForgetGate * h, h) =
        (dc * c_prev.array() * f * (1.0 - f)).matrix();
    da.segment(kCellGate * h, h) = (dc * i * (1.0 - g.square())).matrix();
    da.segment(kOutputGate * h, h) = (dh * tanh_c * o * (1.0 - o)).matrix();

    dc_next = (dc * f).matrix();
    dh_next.noalias() = da * w_recurrent_.value;
  }

  w_input_.grad.noalias() += grad_pre.transpose() * input_;
  w_recurrent_.grad.noalias() += grad_pre.transpose() * prev_hidden;
  bias_.grad.row(0) += grad_pre.colwise().sum();
  return grad_pre * w_input_.value;
}

BiLstm::BiLstm(const std::string& name, int in_dim, int hidden)
    : forward_(name + ".fw", in_dim, hidden, false),
      backward_(name + ".bw", in_dim, hidden, true) {}

void BiLstm::Init(Rng& rng) {
  forward_.Init(rng);
  backward_.Init(rng);
}

Matrix BiLstm::Forward(const Matrix& x) {
  Matrix out(x.rows(), out_dim());
  out.leftCols(hidden()) = forward_.Forward(x);
  out.rightCols(hidden()) = backward_.Forward(x);
  return out;
}

Matrix BiLstm::Backward(const Matrix& grad_out) {
  Matrix grad_x = forward_.Backward(grad_out.leftCols(hidden()));
  grad_x += backward_.Backward(grad_out.rightCols(hidden()));
  return grad_x;
}

ParamList BiLstm::Params() {
  ParamList p = forward_.Params();
  for (Param* q : backward_.Params()) p.push_back(q);
  return p;
}

}  // namespace davoc::nn
