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

#include "vscreen/linear.h"

#include <cmath>

#include "vscreen/common.h"

namespace vscreen::ml {
namespace {

// log(1 + exp(z)) without overflow.
double Softplus(double z) {
  return z > 0 ? z + std::log1p(std::exp(-z)) : std::log1p(std::exp(z));
}

double SoftThreshold(double v, double t) {
  if (v > t) return v - t;
  if (v < -t) return v + t;
  return 0.0;
}

}  // namespace

double Sigmoid(double z) {
  if (z >= 0) return 1.0 / (1.0 + std::exp(-z));
  const double e = std::exp(z);
  return e / (1.0 + e);
}

void CheckBinaryLabels(const Matrix& x, const std::vector<int>& y) {
  if (static_cast<std::size_t>(x.rows()) != y.size()) {
    throw Error("feature rows and labels differ in count");
  }
  if (y.empty()) throw Error("no training samples");
  for (int v : y) {
    if (v != 0 && v != 1) throw Error("labels must be 0 or 1");
  }
}

Vector LinearModel::PredictProba(const Matrix& x) const {
  if (x.cols() != weights_.size()) {
    throw Error("logistic model expects " + std::to_string(weights_.size()) +
                " features, got " + std::to_string(x.cols()));
  }
  Vector z = x * weights_;
  for (Eigen::Index i = 0; i < z.size(); ++i) z(i) = Sigmoid(z(i) + bias_);
  return z;
}

void LinearModel::Serialize(ArtifactWriter& w) const {
  w.Real("logistic.C", params_.C);
  w.Real("logistic.l1_ratio", params_.l1_ratio);
  w.Int("logistic.max_epochs", params_.max_epochs);
  w.Real("logistic.tol", params_.tol);
  w.Int("logistic.epochs_run", epochs_run_);
  w.Int("logistic.converged", converged_ ? 1 : 0);
  w.Real("logistic.bias", bias_);
  w.Vec("logistic.weights", weights_);
}

LinearModel LinearModel::Deserialize(ArtifactReader& r) {
  LinearModel m;
  m.params_.C = r.Real("logistic.C");
  m.params_.l1_ratio = r.Real("logistic.l1_ratio");
  m.params_.max_epochs = static_cast<int>(r.Int("logistic.max_epochs"));
  m.params_.tol = r.Real("logistic.tol");
  m.epochs_run_ = static_cast<int>(r.Int("logistic.epochs_run"));
  m.converged_ = r.Int("logistic.converged") != 0;
  m.bias_ = r.Real("logistic.bias");
  m.weights_ = r.Vec("logistic.weights");
  return m;
}

double LogisticObjective(const Matrix& x, const std::vector<int>& y,
                         const Vector& w, double b, const LogisticParams& p) {
  const double n = static_cast<double>(x.rows());
  const Vector z = x * w;
  double loss = 0;
  for (Eigen::Index i = 0; i < z.size(); ++i) {
    const double zi = z(i) + b;
    loss += Softplus(zi) - y[static_cast<std::size_t>(i)] * zi;
  }
  const double reg = p.l1_ratio * w.lpNorm<1>() +
                     0.5 * (1.0 - p.l1_ratio) * w.squaredNorm();
  return loss / n + reg / (p.C * n);
}

void LogisticGradient(const Matrix& x, const std::vector<int>& y,
                      const Vector& w, double b, const LogisticParams& p,
                      Vector& grad_w, double& grad_b) {
  const double n = static_cast<double>(x.rows());
  Vector r = x * w;
  for (Eigen::Index i = 0; i < r.size(); ++i) {
    r(i) = Sigmoid(r(i) + b) - y[static_cast<std::size_t>(i)];
  }
  grad_w = x.transpose() * r / n;
  grad_b = r.sum() / n;
  const double scale = 1.0 / (p.C * n);
  for (Eigen::Index j = 0; j < w.size(); ++j) {
    const double sign = w(j) > 0 ? 1.0 : (w(j) < 0 ? -1.0 : 0.0);
    grad_w(j) += scale * (p.l1_ratio * sign + (1.0 - p.l1_ratio) * w(j));
  }
}

LinearModel TrainLogisticElastic(const Matrix& x, const std::vector<int>& y,
                                 const LogisticParams& params, uint64_t seed) {
  CheckBinaryLabels(x, y);
  if (params.C <= 0 || params.l1_ratio < 0 || params.l1_ratio > 1) {
    throw Error("invalid logistic regularization parameters");
  }
  const Eigen::Index n = x.rows();
  const Eigen::Index f = x.cols();
  const double dn = static_cast<double>(n);
  const double l1 = params.l1_ratio / (params.C * dn);
  const double l2 = (1.0 - params.l1_ratio) / (params.C * dn);

  // Step from the smoothness constant of the per-sample loss.
  const double max_sq = x.rowwise().squaredNorm().maxCoeff();
  const double lipschitz = 0.25 * (max_sq + 1.0) + l2;
  const double step = 1.0 / (3.0 * lipschitz);

  Vector w = Vector::Zero(f);
  double b = 0;
  Vector grad_sum = Vector::Zero(f);  // sum_i g_i x_i over the memory
  double grad_sum_b = 0;
  std::vector<double> memory(static_cast<std::size_t>(n), 0.0);
  std::vector<uint8_t> seen(static_cast<std::size_t>(n), 0);
  std::size_t seen_count = 0;
  Rng rng(seed);

  LinearModel model;
  model.params_ = params;
  Vector w_prev = w;
  double b_prev = b;
  for (int epoch = 1; epoch <= params.max_epochs; ++epoch) {
    for (Eigen::Index it = 0; it < n; ++it) {
      const auto i = static_cast<Eigen::Index>(
          UniformIndex(rng, static_cast<uint64_t>(n)));
      const auto si = static_cast<std::size_t>(i);
      const double g = Sigmoid(x.row(i).dot(w) + b) - y[si];
      const double delta = g - memory[si];
      if (!seen[si]) {
        seen[si] = 1;
        ++seen_count;
      }
      const double m = static_cast<double>(seen_count);
      // SAGA direction: new - old + average of the memory (after update).
      grad_sum.noalias() += delta * x.row(i).transpose();
      grad_sum_b += delta;
      memory[si] = g;
      const double corr = 1.0 - 1.0 / m;  // weight on the fresh difference
      for (Eigen::Index j = 0; j < f; ++j) {
        const double dir = corr * delta * x(i, j) + grad_sum(j) / m + l2 * w(j);
        w(j) = SoftThreshold(w(j) - step * dir, step * l1);
      }
      b -= step * (corr * delta + grad_sum_b / m);
    }
    if (!w.allFinite() || !std::isfinite(b)) {
      throw Error("logistic training diverged");
    }
    const double change = std::max((w - w_prev).cwiseAbs().maxCoeff(),
                                   std::abs(b - b_prev));
    model.epochs_run_ = epoch;
    w_prev = w;
    b_prev = b;
    if (change < params.tol) {
      model.converged_ = true;
      break;
    }
  }
  model.weights_ = std::move(w);
  model.bias_ = b;
  return model;
}

}  // namespace vscreen::ml
