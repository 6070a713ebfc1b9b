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

#include "vscreen/svm.h"

#include <algorithm>
#include <cmath>
#include <limits>

#include <spdlog/spdlog.h>

#include "vscreen/common.h"
#include "vscreen/linear.h"

namespace vscreen::ml {
namespace {

constexpr double kTau = 1e-12;

// K(i, j) for all rows of a against all rows of b.
Matrix KernelMatrix(const Matrix& a, const Matrix& b, double gamma) {
  const Vector na = a.rowwise().squaredNorm();
  const Vector nb = b.rowwise().squaredNorm();
  Matrix k = -2.0 * (a * b.transpose());
  k.colwise() += na;
  k.rowwise() += nb.transpose();
  k = (-gamma * k.cwiseMax(0.0)).array().exp().matrix();
  if (!k.allFinite()) throw Error("non-finite kernel value");
  return k;
}

}  // namespace

double RbfKernel(const Vector& a, const Vector& b, double gamma) {
  return std::exp(-gamma * (a - b).squaredNorm());
}

double ScaleGamma(const Matrix& x) {
  const double count = static_cast<double>(x.size());
  if (count == 0) return 1.0;
  const double mean = x.sum() / count;
  const double var = (x.array() - mean).square().sum() / count;
  if (var <= 0) return 1.0;
  return 1.0 / (static_cast<double>(x.cols()) * var);
}

SvmModel TrainSvmRbf(const Matrix& x, const std::vector<int>& y,
                     const SvmParams& params, uint64_t /*seed*/) {
  CheckBinaryLabels(x, y);
  if (params.C <= 0 || params.tol <= 0) throw Error("invalid SVM parameters");
  const auto n = static_cast<std::size_t>(x.rows());
  const double c = params.C;
  SvmModel model;
  model.params_ = params;
  model.gamma_ = ScaleGamma(x);
  const Matrix k = KernelMatrix(x, x, model.gamma_);

  std::vector<double> ys(n);
  for (std::size_t i = 0; i < n; ++i) ys[i] = y[i] == 1 ? 1.0 : -1.0;
  std::vector<double> alpha(n, 0.0);
  std::vector<double> grad(n, -1.0);  // gradient of 0.5 a'Qa - e'a
  const auto q = [&](std::size_t i, std::size_t j) {
    return ys[i] * ys[j] * k(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j));
  };
  const auto in_up = [&](std::size_t t) {
    return (ys[t] > 0 && alpha[t] < c) || (ys[t] < 0 && alpha[t] > 0);
  };
  const auto in_low = [&](std::size_t t) {
    return (ys[t] > 0 && alpha[t] > 0) || (ys[t] < 0 && alpha[t] < c);
  };
  const auto dual = [&]() {
    double v = 0;
    for (std::size_t t = 0; t < n; ++t) v += alpha[t] * (grad[t] - 1.0);
    return -0.5 * v;
  };

  const int64_t max_iter =
      params.max_iter > 0 ? params.max_iter
                          : std::max<int64_t>(10000000, 100 * static_cast<int64_t>(n));
  int64_t iter = 0;
  double gap = 0;
  while (true) {
    // Maximal violating i, then the j with the best second-order gain.
    double gmax = -std::numeric_limits<double>::infinity();
    std::size_t i = n;
    for (std::size_t t = 0; t < n; ++t) {
      if (in_up(t) && -ys[t] * grad[t] > gmax) {
        gmax = -ys[t] * grad[t];
        i = t;
      }
    }
    double gmax2 = -std::numeric_limits<double>::infinity();
    std::size_t j = n;
    double best = std::numeric_limits<double>::infinity();
    for (std::size_t t = 0; t < n; ++t) {
      if (!in_low(t)) continue;
      gmax2 = std::max(gmax2, ys[t] * grad[t]);
      if (i == n) continue;
      const double b = gmax + ys[t] * grad[t];
      if (b <= 0) continue;
      double a = q(i, i) + q(t, t) - 2.0 * ys[i] * ys[t] * q(i, t);
      if (a <= 0) a = kTau;
      const double obj = -(b * b) / a;
      if (obj < best) {
        best = obj;
        j = t;
      }
    }
    gap = gmax + gmax2;
    if (i == n || j == n || gap < params.tol) break;
    if (iter >= max_iter) {
      spdlog::warn("SMO stopped at the iteration limit with gap {}", gap);
      break;
    }
    ++iter;

    const double old_i = alpha[i];
    const double old_j = alpha[j];
    const double qii = q(i, i), qjj = q(j, j), qij = q(i, j);
    if (ys[i] != ys[j]) {
      double quad = qii + qjj + 2.0 * qij;
      if (quad <= 0) quad = kTau;
      const double delta = (-grad[i] - grad[j]) / quad;
      const double diff = alpha[i] - alpha[j];
      alpha[i] += delta;
      alpha[j] += delta;
      if (diff > 0) {
        if (alpha[j] < 0) { alpha[j] = 0; alpha[i] = diff; }
      } else {
        if (alpha[i] < 0) { alpha[i] = 0; alpha[j] = -diff; }
      }
      if (diff > 0) {
        if (alpha[i] > c) { alpha[i] = c; alpha[j] = c - diff; }
      } else {
        if (alpha[j] > c) { alpha[j] = c; alpha[i] = c + diff; }
      }
    } else {
      double quad = qii + qjj - 2.0 * qij;
      if (quad <= 0) quad = kTau;
      const double delta = (grad[i] - grad[j]) / quad;
      const double sum = alpha[i] + alpha[j];
      alpha[i] -= delta;
      alpha[j] += delta;
      if (sum > c) {
        if (alpha[i] > c) { alpha[i] = c; alpha[j] = sum - c; }
      } else {
        if (alpha[j] < 0) { alpha[j] = 0; alpha[i] = sum; }
      }
      if (sum > c) {
        if (alpha[j] > c) { alpha[j] = c; alpha[i] = sum - c; }
      } else {
        if (alpha[i] < 0) { alpha[i] = 0; alpha[j] = sum; }
      }
    }
    const double di = alpha[i] - old_i;
    const double dj = alpha[j] - old_j;
    for (std::size_t t = 0; t < n; ++t) grad[t] += q(t, i) * di + q(t, j) * dj;
    if (iter % static_cast<int64_t>(n) == 0) model.dual_trace_.push_back(dual());
  }
  model.dual_trace_.push_back(dual());
  model.iterations_ = iter;
  model.kkt_gap_ = gap;

  // Offset from the free vectors, else the midpoint of the feasible range.
  double ub = std::numeric_limits<double>::infinity();
  double lb = -std::numeric_limits<double>::infinity();
  double free_sum = 0;
  int free_count = 0;
  for (std::size_t t = 0; t < n; ++t) {
    const double yg = ys[t] * grad[t];
    if (alpha[t] >= c) {
      if (ys[t] < 0) ub = std::min(ub, yg); else lb = std::max(lb, yg);
    } else if (alpha[t] <= 0) {
      if (ys[t] > 0) ub = std::min(ub, yg); else lb = std::max(lb, yg);
    } else {
      ++free_count;
      free_sum += yg;
    }
  }
  model.rho_ = free_count > 0 ? free_sum / free_count : (ub + lb) / 2.0;
  if (!std::isfinite(model.rho_)) model.rho_ = 0;

  std::vector<Eigen::Index> sv;
  for (std::size_t t = 0; t < n; ++t) {
    if (alpha[t] > 0) sv.push_back(static_cast<Eigen::Index>(t));
  }
  model.support_vectors_.resize(static_cast<Eigen::Index>(sv.size()), x.cols());
  model.dual_coef_.resize(static_cast<Eigen::Index>(sv.size()));
  for (std::size_t s = 0; s < sv.size(); ++s) {
    const auto r = static_cast<Eigen::Index>(s);
    model.support_vectors_.row(r) = x.row(sv[s]);
    model.dual_coef_(r) = alpha[static_cast<std::size_t>(sv[s])] *
                          ys[static_cast<std::size_t>(sv[s])];
  }
  return model;
}

Vector SvmModel::DecisionFunction(const Matrix& x) const {
  if (x.cols() != support_vectors_.cols()) {
    throw Error("SVM expects " + std::to_string(support_vectors_.cols()) +
                " features, got " + std::to_string(x.cols()));
  }
  if (support_vectors_.rows() == 0) return Vector::Constant(x.rows(), -rho_);
  const Matrix k = KernelMatrix(x, support_vectors_, gamma_);
  return (k * dual_coef_).array() - rho_;
}

Vector SvmModel::PredictProba(const Matrix& x) const {
  Vector z = DecisionFunction(x);
  for (Eigen::Index i = 0; i < z.size(); ++i) z(i) = Sigmoid(z(i));
  return z;
}

void SvmModel::Serialize(ArtifactWriter& w) const {
  w.Real("svm.C", params_.C);
  w.Real("svm.tol", params_.tol);
  w.Text("svm.kernel", "rbf");
  w.Real("svm.gamma", gamma_);
  w.Real("svm.rho", rho_);
  w.Int("svm.iterations", iterations_);
  w.Real("svm.kkt_gap", kkt_gap_);
  w.Vec("svm.dual_coef", dual_coef_);
  w.Mat("svm.support_vectors", support_vectors_);
}

SvmModel SvmModel::Deserialize(ArtifactReader& r) {
  SvmModel m;
  m.params_.C = r.Real("svm.C");
  m.params_.tol = r.Real("svm.tol");
  if (r.Text("svm.kernel") != "rbf") throw Error("unsupported SVM kernel in artifact");
  m.gamma_ = r.Real("svm.gamma");
  m.rho_ = r.Real("svm.rho");
  m.iterations_ = r.Int("svm.iterations");
  m.kkt_gap_ = r.Real("svm.kkt_gap");
  m.dual_coef_ = r.Vec("svm.dual_coef");
  m.support_vectors_ = r.Mat("svm.support_vectors");
  if (m.support_vectors_.rows() != m.dual_coef_.size()) {
    throw Error("SVM artifact support vector count mismatch");
  }
  return m;
}

}  // namespace vscreen::ml
