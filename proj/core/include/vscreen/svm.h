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

// Soft-margin RBF support vector machine solved with SMO using second-order
// working-set selection.

#ifndef VSCREEN_SVM_H_
#define VSCREEN_SVM_H_

#include <cstdint>
#include <vector>

#include "vscreen/artifact.h"

namespace vscreen::ml {

struct SvmParams {
  double C = 1.8;
  double tol = 1e-3;  // maximal violating pair gap at termination
  int64_t max_iter = 0;  // 0 picks max(10^7, 100 n)
};

// exp(-gamma * |a - b|^2).
double RbfKernel(const Vector& a, const Vector& b, double gamma);

// 1 / (F * Var(X)) over all elements; 1 when the variance is zero.
double ScaleGamma(const Matrix& x);

class SvmModel {
 public:
  const Matrix& support_vectors() const { return support_vectors_; }
  const Vector& dual_coef() const { return dual_coef_; }  // alpha_i * y_i
  double rho() const { return rho_; }
  double gamma() const { return gamma_; }
  const SvmParams& params() const { return params_; }
  int64_t iterations() const { return iterations_; }
  double kkt_gap() const { return kkt_gap_; }
  // Dual objective sum(alpha) - 0.5 alpha'Q alpha, sampled every n updates
  // and at termination.
  const std::vector<double>& dual_trace() const { return dual_trace_; }

  Vector DecisionFunction(const Matrix& x) const;
  // Logistic link on the decision value.
  Vector PredictProba(const Matrix& x) const;

  void Serialize(ArtifactWriter& w) const;
  static SvmModel Deserialize(ArtifactReader& r);

 private:
  friend SvmModel TrainSvmRbf(const Matrix&, const std::vector<int>&,
                              const SvmParams&, uint64_t);
  Matrix support_vectors_;
  Vector dual_coef_;
  double rho_ = 0;
  double gamma_ = 1;
  SvmParams params_;
  int64_t iterations_ = 0;
  double kkt_gap_ = 0;
  std::vector<double> dual_trace_;
};

// The solver is deterministic; `seed` is accepted for interface symmetry.
SvmModel TrainSvmRbf(const Matrix& x, const std::vector<int>& y,
                     const SvmParams& params, uint64_t seed);

}  // namespace vscreen::ml

#endif  // VSCREEN_SVM_H_
