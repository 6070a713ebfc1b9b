/*
 * Copyright 2026 The vscreen Authors.
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     https://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#include "vscreen/bilstm.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include <spdlog/spdlog.h>

namespace vscreen::seq {
namespace {

using Array = Eigen::ArrayXd;

// Parameter layout: per layer and direction {w_ih, w_hh, bias}, then per
// head layer {weight, bias, slope}, then the output {weight, bias}.
constexpr int kPerDirection = 3;
constexpr int kPerHead = 3;

std::size_t DirBase(int layer, int dir) {
  return static_cast<std::size_t>((layer * 2 + dir) * kPerDirection);
}
std::size_t HeadBase(const BiLstmConfig& c, int k) {
  return static_cast<std::size_t>(c.layers * 2 * kPerDirection + k * kPerHead);
}
std::size_t OutBase(const BiLstmConfig& c) { return HeadBase(c, c.head_layers); }

Array SigmoidArray(const Array& z) { return 1.0 / (1.0 + (-z).exp()); }

double Softplus(double z) {
  return z > 0 ? z + std::log1p(std::exp(-z)) : std::log1p(std::exp(z));
}

double SigmoidScalar(double z) {
  if (z >= 0) return 1.0 / (1.0 + std::exp(-z));
  const double e = std::exp(z);
  return e / (1.0 + e);
}

// Users in descending length order; columns of user `pos` start at
// offset[pos] in the packed layout.
struct Packing {
  std::vector<int> order;  // packed position -> batch index
  std::vector<int> length;
  std::vector<int> offset;
  std::vector<int> active;  // active[k] = users with length > k
  int total = 0;
  int max_len = 0;

  int Col(int pos, int t) const { return offset[static_cast<std::size_t>(pos)] + t; }
  int Len(int pos) const { return length[static_cast<std::size_t>(pos)]; }
};

Packing Pack(const std::vector<const Matrix*>& batch, int max_sentences,
             int input_dim) {
  Packing p;
  const int b = static_cast<int>(batch.size());
  std::vector<int> lens(batch.size());
  for (int i = 0; i < b; ++i) {
    const Matrix* m = batch[static_cast<std::size_t>(i)];
    if (m == nullptr || m->cols() == 0) throw Error("empty sentence sequence");
    if (m->rows() != input_dim) {
      throw Error("sequence model expects " + std::to_string(input_dim) +
                  " features per sentence, got " + std::to_string(m->rows()));
    }
    lens[static_cast<std::size_t>(i)] =
        static_cast<int>(std::min<Eigen::Index>(m->cols(), max_sentences));
  }
  p.order.resize(batch.size());
  std::iota(p.order.begin(), p.order.end(), 0);
  std::stable_sort(p.order.begin(), p.order.end(), [&](int a, int c) {
    return lens[static_cast<std::size_t>(a)] > lens[static_cast<std::size_t>(c)];
  });
  for (int pos = 0; pos < b; ++pos) {
    const int len = lens[static_cast<std::size_t>(p.order[static_cast<std::size_t>(pos)])];
    p.length.push_back(len);
    p.offset.push_back(p.total);
    p.total += len;
  }
  p.max_len = b > 0 ? p.length[0] : 0;
  p.active.assign(static_cast<std::size_t>(p.max_len), 0);
  for (int k = 0; k < p.max_len; ++k) {
    int m = 0;
    while (m < b && p.Len(m) > k) ++m;
    p.active[static_cast<std::size_t>(k)] = m;
  }
  return p;
}

// Time index of step k for a user of length len; the backward direction
// walks the sequence from its end.
int TimeAt(int k, int len, bool reverse) { return reverse ? len - 1 - k : k; }

struct DirTape {
  Matrix gates;   // 4H x N, activated i, f, g, o
  Matrix cell;    // H x N
  Matrix hidden;  // H x N
};

struct LayerTape {
  Matrix input;  // in x N, after dropout
  DirTape dir[2];
  Matrix out_mask;  // 2H x N dropout mask on this layer's output; empty if off
};

struct Tape {
  Packing pack;
  std::vector<LayerTape> layers;
  Matrix final_mask;  // 2H x B; empty if off
  Matrix final;       // 2H x B, after dropout
  std::vector<Matrix> head_in;   // input of each head layer
  std::vector<Matrix> head_pre;  // pre-activation of each head layer
  Matrix out_in;                 // input of the output layer
  Eigen::RowVectorXd logits;     // 1 x B in packed order
};

Matrix DropoutMask(Eigen::Index rows, Eigen::Index cols, double p, Rng& rng) {
  Matrix mask(rows, cols);
  const double keep = 1.0 / (1.0 - p);
  for (Eigen::Index c = 0; c < cols; ++c) {
    for (Eigen::Index r = 0; r < rows; ++r) {
      mask(r, c) = UniformUnit(rng) < p ? 0.0 : keep;
    }
  }
  return mask;
}

void RunDirection(const Matrix& w_ih, const Matrix& w_hh, const Matrix& bias,
                  const Matrix& input, const Packing& p, bool reverse,
                  DirTape& tape) {
  const Eigen::Index h = w_hh.cols();
  const int b = static_cast<int>(p.order.size());
  tape.gates.noalias() = w_ih * input;
  tape.gates.colwise() += bias.col(0);
  tape.cell.resize(h, p.total);
  tape.hidden.resize(h, p.total);
  Matrix h_prev = Matrix::Zero(h, b);
  Matrix z(4 * h, b);
  for (int k = 0; k < p.max_len; ++k) {
    const int m = p.active[static_cast<std::size_t>(k)];
    for (int pos = 0; pos < m; ++pos) {
      const int t = TimeAt(k, p.Len(pos), reverse);
      if (k == 0) {
        h_prev.col(pos).setZero();
      } else {
        h_prev.col(pos) = tape.hidden.col(p.Col(pos, reverse ? t + 1 : t - 1));
      }
    }
    z.leftCols(m).noalias() = w_hh * h_prev.leftCols(m);
    for (int pos = 0; pos < m; ++pos) {
      const int t = TimeAt(k, p.Len(pos), reverse);
      const int col = p.Col(pos, t);
      const Array pre = z.col(pos).array() + tape.gates.col(col).array();
      const Array i = SigmoidArray(pre.segment(0, h));
      const Array f = SigmoidArray(pre.segment(h, h));
      const Array g = pre.segment(2 * h, h).tanh();
      const Array o = SigmoidArray(pre.segment(3 * h, h));
      Array c = i * g;
      if (k > 0) c += f * tape.cell.col(p.Col(pos, reverse ? t + 1 : t - 1)).array();
      tape.gates.col(col) << i.matrix(), f.matrix(), g.matrix(), o.matrix();
      tape.cell.col(col) = c.matrix();
      tape.hidden.col(col) = (o * c.tanh()).matrix();
    }
  }
}

// Backpropagates dh_out (H x N) through one direction. Fills dz (4H x N)
// with pre-activation gradients and h_prev (H x N) with each step's
// incoming hidden state so weight gradients are single products.
void BackDirection(const Matrix& w_hh, const Packing& p, bool reverse,
                   const DirTape& tape, const Matrix& dh_out, Matrix& dz,
                   Matrix& h_prev) {
  const Eigen::Index h = w_hh.cols();
  const int b = static_cast<int>(p.order.size());
  dz.resize(4 * h, p.total);
  h_prev.setZero(h, p.total);
  Matrix dh_next = Matrix::Zero(h, b);
  Matrix dc_next = Matrix::Zero(h, b);
  Matrix dz_step(4 * h, b);
  for (int k = p.max_len - 1; k >= 0; --k) {
    const int m = p.active[static_cast<std::size_t>(k)];
    for (int pos = 0; pos < m; ++pos) {
      const int t = TimeAt(k, p.Len(pos), reverse);
      const int col = p.Col(pos, t);
      const int prev = k == 0 ? -1 : p.Col(pos, reverse ? t + 1 : t - 1);
      const auto gates = tape.gates.col(col).array();
      const Array i = gates.segment(0, h);
      const Array f = gates.segment(h, h);
      const Array g = gates.segment(2 * h, h);
      const Array o = gates.segment(3 * h, h);
      const Array tc = tape.cell.col(col).array().tanh();
      const Array dh = dh_out.col(col).array() + dh_next.col(pos).array();
      const Array dc = dc_next.col(pos).array() + dh * o * (1.0 - tc * tc);
      const Array c_prev = prev < 0 ? Array::Zero(h) : Array(tape.cell.col(prev).array());
      dz_step.col(pos) << (dc * g * i * (1.0 - i)).matrix(),
          (dc * c_prev * f * (1.0 - f)).matrix(),
          (dc * i * (1.0 - g * g)).matrix(), (dh * tc * o * (1.0 - o)).matrix();
      dc_next.col(pos) = (dc * f).matrix();
      if (prev >= 0) h_prev.col(col) = tape.hidden.col(prev);
      dz.col(col) = dz_step.col(pos);
    }
    dh_next.leftCols(m).noalias() = w_hh.transpose() * dz_step.leftCols(m);
  }
}

Matrix Prelu(const Matrix& a, double slope) {
  return a.unaryExpr([slope](double v) { return v > 0 ? v : slope * v; });
}

class Runner {
 public:
  explicit Runner(const BiLstmNet& net) : net_(net), c_(net.config()) {}

  const Matrix& P(std::size_t i) const { return net_.params()[i].value; }

  void Forward(const std::vector<const Matrix*>& batch, Rng* rng, Tape& tape) const {
    tape.pack = Pack(batch, c_.max_sentences, c_.input_dim);
    const Packing& p = tape.pack;
    const int b = static_cast<int>(batch.size());
    const Eigen::Index h = c_.hidden;
    const bool drop = rng != nullptr && c_.dropout > 0;
    tape.layers.assign(static_cast<std::size_t>(c_.layers), LayerTape{});

    Matrix& x0 = tape.layers[0].input;
    x0.resize(c_.input_dim, p.total);
    for (int pos = 0; pos < b; ++pos) {
      const Matrix& s = *batch[static_cast<std::size_t>(p.order[static_cast<std::size_t>(pos)])];
      x0.middleCols(p.offset[static_cast<std::size_t>(pos)], p.Len(pos)) =
          s.leftCols(p.Len(pos));
    }
    for (int l = 0; l < c_.layers; ++l) {
      LayerTape& lt = tape.layers[static_cast<std::size_t>(l)];
      for (int d = 0; d < 2; ++d) {
        const std::size_t base = DirBase(l, d);
        RunDirection(P(base), P(base + 1), P(base + 2), lt.input, p, d == 1,
                     lt.dir[d]);
      }
      if (l + 1 < c_.layers) {
        Matrix out(2 * h, p.total);
        out << lt.dir[0].hidden, lt.dir[1].hidden;
        if (drop) {
          lt.out_mask = DropoutMask(out.rows(), out.cols(), c_.dropout, *rng);
          out = out.cwiseProduct(lt.out_mask);
        }
        tape.layers[static_cast<std::size_t>(l + 1)].input = std::move(out);
      }
    }
    // Forward state at the last sentence, backward state at the first.
    const LayerTape& top = tape.layers.back();
    tape.final.resize(2 * h, b);
    for (int pos = 0; pos < b; ++pos) {
      tape.final.col(pos) << top.dir[0].hidden.col(p.Col(pos, p.Len(pos) - 1)),
          top.dir[1].hidden.col(p.Col(pos, 0));
    }
    if (drop) {
      tape.final_mask = DropoutMask(2 * h, b, c_.dropout, *rng);
      tape.final = tape.final.cwiseProduct(tape.final_mask);
    }
    tape.head_in.clear();
    tape.head_pre.clear();
    Matrix act = tape.final;
    for (int k = 0; k < c_.head_layers; ++k) {
      const std::size_t base = HeadBase(c_, k);
      Matrix pre = P(base) * act;
      pre.colwise() += P(base + 1).col(0);
      tape.head_in.push_back(std::move(act));
      act = Prelu(pre, P(base + 2)(0, 0));
      tape.head_pre.push_back(std::move(pre));
    }
    const std::size_t out = OutBase(c_);
    tape.logits = (P(out) * act).row(0).array() + P(out + 1)(0, 0);
    tape.out_in = std::move(act);
  }

  void Backward(const Tape& tape, const Eigen::RowVectorXd& dlogits,
                std::vector<Matrix>& grads) const {
    const Packing& p = tape.pack;
    const int b = static_cast<int>(p.order.size());
    const Eigen::Index h = c_.hidden;
    grads.resize(net_.params().size());
    const std::size_t out = OutBase(c_);
    grads[out] = dlogits * tape.out_in.transpose();
    grads[out + 1] = Matrix::Constant(1, 1, dlogits.sum());
    Matrix dact = P(out).transpose() * dlogits;
    for (int k = c_.head_layers - 1; k >= 0; --k) {
      const std::size_t base = HeadBase(c_, k);
      const double slope = P(base + 2)(0, 0);
      const Matrix& pre = tape.head_pre[static_cast<std::size_t>(k)];
      double dslope = 0;
      Matrix dpre(pre.rows(), pre.cols());
      for (Eigen::Index j = 0; j < pre.cols(); ++j) {
        for (Eigen::Index i = 0; i < pre.rows(); ++i) {
          if (pre(i, j) > 0) {
            dpre(i, j) = dact(i, j);
          } else {
            dpre(i, j) = slope * dact(i, j);
            dslope += dact(i, j) * pre(i, j);
          }
        }
      }
      grads[base] = dpre * tape.head_in[static_cast<std::size_t>(k)].transpose();
      grads[base + 1] = dpre.rowwise().sum();
      grads[base + 2] = Matrix::Constant(1, 1, dslope);
      dact = P(base).transpose() * dpre;
    }
    Matrix dfinal = std::move(dact);
    if (tape.final_mask.size() > 0) dfinal = dfinal.cwiseProduct(tape.final_mask);

    Matrix dy = Matrix::Zero(2 * h, p.total);
    for (int pos = 0; pos < b; ++pos) {
      dy.block(0, p.Col(pos, p.Len(pos) - 1), h, 1) += dfinal.col(pos).head(h);
      dy.block(h, p.Col(pos, 0), h, 1) += dfinal.col(pos).tail(h);
    }
    Matrix dz, h_prev;
    for (int l = c_.layers - 1; l >= 0; --l) {
      const LayerTape& lt = tape.layers[static_cast<std::size_t>(l)];
      Matrix dinput = Matrix::Zero(lt.input.rows(), p.total);
      for (int d = 0; d < 2; ++d) {
        const std::size_t base = DirBase(l, d);
        const Matrix dh_out = dy.middleRows(d * h, h);
        BackDirection(P(base + 1), p, d == 1, lt.dir[d], dh_out, dz, h_prev);
        grads[base] = dz * lt.input.transpose();
        grads[base + 1] = dz * h_prev.transpose();
        grads[base + 2] = dz.rowwise().sum();
        if (l > 0) dinput.noalias() += P(base).transpose() * dz;
      }
      if (l > 0) {
        const Matrix& mask = tape.layers[static_cast<std::size_t>(l - 1)].out_mask;
        dy = mask.size() > 0 ? Matrix(dinput.cwiseProduct(mask)) : dinput;
      }
    }
  }

 private:
  const BiLstmNet& net_;
  const BiLstmConfig& c_;
};

double BatchLoss(const Eigen::RowVectorXd& logits, const std::vector<double>& y) {
  double total = 0;
  for (Eigen::Index i = 0; i < logits.size(); ++i) {
    total += Softplus(logits(i)) - y[static_cast<std::size_t>(i)] * logits(i);
  }
  return total / static_cast<double>(logits.size());
}

std::vector<const Matrix*> Pointers(const std::vector<Matrix>& seqs,
                                    std::size_t begin, std::size_t end) {
  std::vector<const Matrix*> out;
  for (std::size_t i = begin; i < end; ++i) out.push_back(&seqs[i]);
  return out;
}

constexpr std::size_t kInferenceChunk = 64;

}  // namespace

void BiLstmConfig::Validate() const {
  if (input_dim <= 0 || hidden <= 0 || layers <= 0 || head_width <= 0 ||
      head_layers < 0 || max_sentences <= 0) {
    throw Error("sequence model sizes must be positive");
  }
  if (dropout < 0 || dropout >= 1) throw Error("dropout must be in [0, 1)");
}

double OneCycleLr(int64_t step, int64_t total_steps, const OneCycleConfig& cfg) {
  if (total_steps <= 0) throw Error("OneCycle schedule needs at least one step");
  if (step < 0 || step > total_steps) throw Error("OneCycle step out of range");
  if (cfg.warmup_fraction <= 0 || cfg.warmup_fraction >= 1) {
    throw Error("OneCycle warmup fraction must be in (0, 1)");
  }
  const double initial = cfg.max_lr / cfg.initial_div;
  const double final_lr = initial / cfg.final_div;
  const double warm = cfg.warmup_fraction * static_cast<double>(total_steps);
  const double s = static_cast<double>(step);
  if (s <= warm) return initial + (cfg.max_lr - initial) * (s / warm);
  const double frac = (s - warm) / (static_cast<double>(total_steps) - warm);
  return cfg.max_lr + (final_lr - cfg.max_lr) * frac;
}

BiLstmNet::BiLstmNet(const BiLstmConfig& config, uint64_t seed) : config_(config) {
  config_.Validate();
  Rng rng(MixSeed(seed, 0x1417));
  const auto uniform = [&](Eigen::Index rows, Eigen::Index cols, double bound) {
    Matrix m(rows, cols);
    for (Eigen::Index c = 0; c < cols; ++c) {
      for (Eigen::Index r = 0; r < rows; ++r) {
        m(r, c) = (2.0 * UniformUnit(rng) - 1.0) * bound;
      }
    }
    return m;
  };
  const Eigen::Index h = config_.hidden;
  const double rec_bound = 1.0 / std::sqrt(static_cast<double>(h));
  for (int l = 0; l < config_.layers; ++l) {
    const Eigen::Index in = l == 0 ? config_.input_dim : 2 * h;
    for (int d = 0; d < 2; ++d) {
      const std::string prefix =
          "lstm.l" + std::to_string(l) + (d == 0 ? ".fw." : ".bw.");
      params_.push_back({prefix + "w_ih", uniform(4 * h, in, rec_bound)});
      params_.push_back({prefix + "w_hh", uniform(4 * h, h, rec_bound)});
      Matrix bias = uniform(4 * h, 1, rec_bound);
      bias.block(h, 0, h, 1).array() += 1.0;
      params_.push_back({prefix + "bias", std::move(bias)});
    }
  }
  Eigen::Index in = 2 * h;
  for (int k = 0; k < config_.head_layers; ++k) {
    const std::string prefix = "head.l" + std::to_string(k) + ".";
    const double bound = 1.0 / std::sqrt(static_cast<double>(in));
    params_.push_back({prefix + "weight", uniform(config_.head_width, in, bound)});
    params_.push_back({prefix + "bias", uniform(config_.head_width, 1, bound)});
    params_.push_back({prefix + "slope", Matrix::Constant(1, 1, 0.25)});
    in = config_.head_width;
  }
  const double bound = 1.0 / std::sqrt(static_cast<double>(in));
  params_.push_back({"out.weight", uniform(1, in, bound)});
  params_.push_back({"out.bias", uniform(1, 1, bound)});
}

std::size_t BiLstmNet::parameter_count() const {
  std::size_t n = 0;
  for (const auto& p : params_) n += static_cast<std::size_t>(p.value.size());
  return n;
}

Vector BiLstmNet::Logits(const std::vector<const Matrix*>& batch) const {
  Vector out(static_cast<Eigen::Index>(batch.size()));
  if (batch.empty()) return out;
  Runner runner(*this);
  Tape tape;
  runner.Forward(batch, nullptr, tape);
  for (std::size_t pos = 0; pos < batch.size(); ++pos) {
    out(tape.pack.order[pos]) = tape.logits(static_cast<Eigen::Index>(pos));
  }
  return out;
}

Vector BiLstmNet::PredictProba(const std::vector<const Matrix*>& batch) const {
  Vector z = Logits(batch);
  // Kept strictly inside (0, 1) even for saturated logits.
  constexpr double kLow = 1e-300;
  constexpr double kHigh = 1.0 - 0x1.0p-53;
  for (Eigen::Index i = 0; i < z.size(); ++i) {
    z(i) = std::clamp(SigmoidScalar(z(i)), kLow, kHigh);
  }
  return z;
}

double BiLstmNet::LossAndGradient(const std::vector<const Matrix*>& batch,
                                  const std::vector<int>& labels, Rng* dropout_rng,
                                  std::vector<Matrix>* grads) const {
  if (batch.empty() || batch.size() != labels.size()) {
    throw Error("batch and labels must be non-empty and equal in size");
  }
  Runner runner(*this);
  Tape tape;
  runner.Forward(batch, dropout_rng, tape);
  std::vector<double> y(batch.size());
  for (std::size_t pos = 0; pos < batch.size(); ++pos) {
    y[pos] = labels[static_cast<std::size_t>(tape.pack.order[pos])];
  }
  const double loss = BatchLoss(tape.logits, y);
  if (grads != nullptr) {
    const double scale = 1.0 / static_cast<double>(batch.size());
    Eigen::RowVectorXd dlogits(tape.logits.size());
    for (Eigen::Index i = 0; i < dlogits.size(); ++i) {
      dlogits(i) = (SigmoidScalar(tape.logits(i)) - y[static_cast<std::size_t>(i)]) * scale;
    }
    runner.Backward(tape, dlogits, *grads);
  }
  return loss;
}

void BiLstmNet::Serialize(ArtifactWriter& w) const {
  w.Int("bilstm.input_dim", config_.input_dim);
  w.Int("bilstm.hidden", config_.hidden);
  w.Int("bilstm.layers", config_.layers);
  w.Int("bilstm.head_width", config_.head_width);
  w.Int("bilstm.head_layers", config_.head_layers);
  w.Real("bilstm.dropout", config_.dropout);
  w.Int("bilstm.max_sentences", config_.max_sentences);
  for (const auto& p : params_) {
    w.Text("bilstm.param", p.name);
    w.Mat("bilstm.value", p.value);
  }
}

BiLstmNet BiLstmNet::Deserialize(ArtifactReader& r) {
  BiLstmConfig c;
  c.input_dim = static_cast<int>(r.Int("bilstm.input_dim"));
  c.hidden = static_cast<int>(r.Int("bilstm.hidden"));
  c.layers = static_cast<int>(r.Int("bilstm.layers"));
  c.head_width = static_cast<int>(r.Int("bilstm.head_width"));
  c.head_layers = static_cast<int>(r.Int("bilstm.head_layers"));
  c.dropout = r.Real("bilstm.dropout");
  c.max_sentences = static_cast<int>(r.Int("bilstm.max_sentences"));
  // A fresh net supplies the expected names and shapes.
  BiLstmNet net(c, 0);
  for (auto& p : net.params_) {
    const std::string name = r.Text("bilstm.param");
    if (name != p.name) {
      throw Error("sequence model artifact: expected tensor " + p.name + ", found " + name);
    }
    Matrix value = r.Mat("bilstm.value");
    if (value.rows() != p.value.rows() || value.cols() != p.value.cols()) {
      throw Error("sequence model artifact: wrong shape for " + name);
    }
    p.value = std::move(value);
  }
  return net;
}

double EvaluateLoss(const BiLstmNet& net, const std::vector<Matrix>& seqs,
                    const std::vector<int>& labels) {
  if (seqs.empty() || seqs.size() != labels.size()) {
    throw Error("evaluation set must be non-empty with one label per sequence");
  }
  double total = 0;
  for (std::size_t begin = 0; begin < seqs.size(); begin += kInferenceChunk) {
    const std::size_t end = std::min(seqs.size(), begin + kInferenceChunk);
    const std::vector<int> y(labels.begin() + static_cast<std::ptrdiff_t>(begin),
                             labels.begin() + static_cast<std::ptrdiff_t>(end));
    total += net.LossAndGradient(Pointers(seqs, begin, end), y, nullptr, nullptr) *
             static_cast<double>(end - begin);
  }
  return total / static_cast<double>(seqs.size());
}

Vector PredictSequences(const BiLstmNet& net, const std::vector<Matrix>& seqs) {
  Vector out(static_cast<Eigen::Index>(seqs.size()));
  for (std::size_t begin = 0; begin < seqs.size(); begin += kInferenceChunk) {
    const std::size_t end = std::min(seqs.size(), begin + kInferenceChunk);
    out.segment(static_cast<Eigen::Index>(begin), static_cast<Eigen::Index>(end - begin)) =
        net.PredictProba(Pointers(seqs, begin, end));
  }
  return out;
}

BiLstmTrainResult TrainBiLstm(const std::vector<Matrix>& train,
                              const std::vector<int>& train_labels,
                              const std::vector<Matrix>& val,
                              const std::vector<int>& val_labels,
                              const BiLstmConfig& model_config,
                              const BiLstmTrainConfig& tc) {
  if (train.empty() || val.empty()) throw Error("training and validation sets must be non-empty");
  if (train.size() != train_labels.size() || val.size() != val_labels.size()) {
    throw Error("one label per sequence is required");
  }
  if (tc.epochs <= 0 || tc.batch_size <= 0 || tc.patience < 1) {
    throw Error("invalid sequence training configuration");
  }
  BiLstmTrainResult result;
  BiLstmNet net(model_config, tc.seed);
  std::vector<Matrix> m1, m2;
  for (const auto& p : net.params()) {
    m1.push_back(Matrix::Zero(p.value.rows(), p.value.cols()));
    m2.push_back(Matrix::Zero(p.value.rows(), p.value.cols()));
  }
  const auto batch = static_cast<std::size_t>(tc.batch_size);
  const int64_t steps_per_epoch =
      static_cast<int64_t>((train.size() + batch - 1) / batch);
  const int64_t total_steps = steps_per_epoch * tc.epochs;
  int64_t step = 0;
  std::vector<Matrix> grads;
  std::vector<std::size_t> perm(train.size());
  double best = std::numeric_limits<double>::infinity();
  int since_best = 0;
  double lr = 0;

  for (int epoch = 1; epoch <= tc.epochs; ++epoch) {
    std::iota(perm.begin(), perm.end(), std::size_t{0});
    Rng shuffle(MixSeed(tc.seed, 0x5000 + static_cast<uint64_t>(epoch)));
    for (std::size_t i = perm.size(); i > 1; --i) {
      std::swap(perm[i - 1], perm[UniformIndex(shuffle, i)]);
    }
    double epoch_loss = 0;
    for (std::size_t begin = 0; begin < perm.size(); begin += batch) {
      const std::size_t end = std::min(perm.size(), begin + batch);
      std::vector<const Matrix*> xs;
      std::vector<int> ys;
      for (std::size_t i = begin; i < end; ++i) {
        xs.push_back(&train[perm[i]]);
        ys.push_back(train_labels[perm[i]]);
      }
      Rng dropout_rng(MixSeed(tc.seed, 0x100000000ULL + static_cast<uint64_t>(step)));
      const double loss = net.LossAndGradient(xs, ys, &dropout_rng, &grads);
      if (!std::isfinite(loss)) {
        throw Error("sequence training diverged: non-finite loss at epoch " +
                    std::to_string(epoch) + ", step " + std::to_string(step));
      }
      epoch_loss += loss * static_cast<double>(end - begin);
      lr = OneCycleLr(step, total_steps, tc.schedule);
      ++step;
      const double c1 = 1.0 - std::pow(tc.beta1, static_cast<double>(step));
      const double c2 = 1.0 - std::pow(tc.beta2, static_cast<double>(step));
      for (std::size_t k = 0; k < grads.size(); ++k) {
        Matrix& w = net.params()[k].value;
        w *= 1.0 - lr * tc.weight_decay;
        m1[k] = tc.beta1 * m1[k] + (1.0 - tc.beta1) * grads[k];
        m2[k] = tc.beta2 * m2[k] + (1.0 - tc.beta2) * grads[k].cwiseAbs2();
        w.array() -= lr * (m1[k].array() / c1) /
                     ((m2[k].array() / c2).sqrt() + tc.eps);
      }
    }
    EpochLog entry;
    entry.epoch = epoch;
    entry.train_loss = epoch_loss / static_cast<double>(train.size());
    entry.val_loss = EvaluateLoss(net, val, val_labels);
    entry.lr = lr;
    result.log.push_back(entry);
    spdlog::debug("epoch {} train {:.6f} val {:.6f} lr {:.3g}", epoch,
                  entry.train_loss, entry.val_loss, lr);
    if (!std::isfinite(entry.val_loss)) {
      throw Error("sequence training diverged: non-finite validation loss at epoch " +
                  std::to_string(epoch));
    }
    if (entry.val_loss < best) {
      best = entry.val_loss;
      result.net = net;
      result.best_epoch = epoch;
      since_best = 0;
    } else if (++since_best >= tc.patience) {
      break;
    }
  }
  result.best_val_loss = best;
  return result;
}

std::string FormatTrainingLog(const std::vector<EpochLog>& log) {
  std::string out = "epoch\ttrain_loss\tval_loss\tlr\n";
  for (const auto& e : log) {
    out += std::to_string(e.epoch) + "\t" + FormatShort(e.train_loss) + "\t" +
           FormatShort(e.val_loss) + "\t" + FormatShort(e.lr) + "\n";
  }
  return out;
}

}  // namespace vscreen::seq
