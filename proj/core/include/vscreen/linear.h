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

// Elastic-net logistic regression trained with SAGA and a proximal L1 step.
//
// Objective over n samples:
//   mean_i logloss(y_i, sigmoid(w.x_i + b))
//     + (1 / (C n)) * (l1_ratio * |w|_1 + 0.5 * (1 - l1_ratio) * |w|_2^2)
// The bias is not penalized.

#ifndef VSCREEN_LINEAR_H_
#define VSCREEN_LINEAR_H_

#include <cstdint>
#include <vector>

#include "vscreen/artifact.h"

namespace vscreen::ml {

struct LogisticParams {
  double C = 0.02;
  double l1_ratio = 0.05;
  int max_epochs = 500;
  double tol = 1e-6;  // max absolute parameter change over one epoch
};

class LinearModel {
 public:
  LinearModel() = default;
  LinearModel(Vector weights, double bias, LogisticParams params)
      : weights_(std::move(weights)), bias_(bias), params_(params) {}

  const Vector& weights() const { return weights_; }
  double bias() const { return bias_; }
  const LogisticParams& params() const { return params_; }
  int epochs_run() const { return epochs_run_; }
  bool converged() const { return converged_; }

  Vector PredictProba(const Matrix& x) const;

  void Serialize(ArtifactWriter& w) const;
  static LinearModel Deserialize(ArtifactReader& r);

 private:
  friend LinearModel TrainLogisticElastic(const Matrix&, const std::vector<int>&,
                                          const LogisticParams&, uint64_t);
  Vector weights_;
  double bias_ = 0;
  LogisticParams params_;
  int epochs_run_ = 0;
  bool converged_ = false;
};

LinearModel TrainLogisticElastic(const Matrix& x, const std::vector<int>& y,
                                 const LogisticParams& params, uint64_t seed);

// The training objective and its gradient (subgradient sign(w) for the L1
// term, which is exact away from w_j = 0). Exposed for verification.
double LogisticObjective(const Matrix& x, const std::vector<int>& y,
                         const Vector& w, double b, const LogisticParams& p);
void LogisticGradient(const Matrix& x, const std::vector<int>& y,
                      const Vector& w, double b, const LogisticParams& p,
                      Vector& grad_w, double& grad_b);

// Throws unless every label is 0 or 1 and the sizes agree.
void CheckBinaryLabels(const Matrix& x, const std::vector<int>& y);

double Sigmoid(double z);

}  // namespace vscreen::ml

#endif  // VSCREEN_LINEAR_H_
