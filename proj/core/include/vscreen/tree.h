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

// Binary decision trees, the bagged random forest and gradient boosting on
// logistic loss, plus mean-decrease-in-impurity importances.

#ifndef VSCREEN_TREE_H_
#define VSCREEN_TREE_H_

#include <cstddef>
#include <cstdint>
#include <vector>

#include "vscreen/artifact.h"

namespace vscreen::ml {

struct TreeNode {
  int feature = -1;  // -1 marks a leaf
  double threshold = 0;  // rows with x[feature] <= threshold go left
  int left = -1;
  int right = -1;
  // Leaf output: probability of the positive class for classification
  // trees, the additive stage value for boosting trees.
  double value = 0;
  double impurity = 0;
  double samples = 0;  // training rows reaching the node, repeats included
};

class DecisionTree {
 public:
  std::vector<TreeNode>& nodes() { return nodes_; }
  const std::vector<TreeNode>& nodes() const { return nodes_; }
  double Predict(const double* row) const;
  int depth() const;
  std::size_t leaf_count() const;

  // Adds each split's weighted impurity decrease, normalized by the root
  // weight, to importance[feature].
  void AccumulateImpurityDecrease(std::vector<double>& importance) const;

  void Serialize(ArtifactWriter& w) const;
  static DecisionTree Deserialize(ArtifactReader& r);

 private:
  std::vector<TreeNode> nodes_;
};

enum class SplitCriterion { kGini, kSquaredError };

struct TreeGrowParams {
  SplitCriterion criterion = SplitCriterion::kGini;
  int max_depth = 13;
  int min_samples_split = 6;
  int min_samples_leaf = 1;
  int max_features = 0;  // candidate features per node; 0 means all
};

// Grows one tree on the rows listed in `rows` (repeats allowed). `target` is
// the 0/1 label for Gini trees and the regression target otherwise. Leaves
// store the positive fraction or the target mean.
DecisionTree GrowTree(const Matrix& x, const std::vector<double>& target,
                      std::vector<int> rows, const TreeGrowParams& params,
                      uint64_t seed);

struct ForestParams {
  int n_trees = 56;
  int max_depth = 13;
  int min_samples_split = 6;
  int min_samples_leaf = 1;
};

class ForestModel {
 public:
  const std::vector<DecisionTree>& trees() const { return trees_; }
  const ForestParams& params() const { return params_; }
  uint64_t seed() const { return seed_; }
  std::size_t n_features() const { return n_features_; }

  // Mean of the trees' leaf probabilities.
  Vector PredictProba(const Matrix& x) const;

  void Serialize(ArtifactWriter& w) const;
  static ForestModel Deserialize(ArtifactReader& r);

 private:
  friend ForestModel TrainRandomForest(const Matrix&, const std::vector<int>&,
                                       const ForestParams&, uint64_t,
                                       std::size_t);
  std::vector<DecisionTree> trees_;
  ForestParams params_;
  uint64_t seed_ = 0;
  std::size_t n_features_ = 0;
};

// Trees are grown on bootstrap samples with ceil(sqrt(F)) candidate features
// per split. Tree t draws from MixSeed(seed, t), so the result does not
// depend on `workers`.
ForestModel TrainRandomForest(const Matrix& x, const std::vector<int>& y,
                              const ForestParams& params, uint64_t seed,
                              std::size_t workers = 1);

struct BoostingParams {
  int n_estimators = 45;
  double learning_rate = 0.4;
  int max_depth = 3;
  int min_samples_split = 2;
};

class GbmModel {
 public:
  double initial_logit() const { return initial_logit_; }
  const std::vector<DecisionTree>& trees() const { return trees_; }
  const BoostingParams& params() const { return params_; }
  // Mean training log-loss after the initial guess and after each stage.
  const std::vector<double>& loss_trace() const { return loss_trace_; }
  std::size_t n_features() const { return n_features_; }

  Vector DecisionFunction(const Matrix& x) const;
  Vector PredictProba(const Matrix& x) const;

  void Serialize(ArtifactWriter& w) const;
  static GbmModel Deserialize(ArtifactReader& r);

 private:
  friend GbmModel TrainGradientBoosting(const Matrix&, const std::vector<int>&,
                                        const BoostingParams&, uint64_t);
  double initial_logit_ = 0;
  std::vector<DecisionTree> trees_;
  BoostingParams params_;
  std::vector<double> loss_trace_;
  std::size_t n_features_ = 0;
};

// Each stage fits a squared-error tree to the residuals y - p and replaces
// every leaf with the Newton step sum(r) / sum(p(1-p)).
GbmModel TrainGradientBoosting(const Matrix& x, const std::vector<int>& y,
                               const BoostingParams& params, uint64_t seed);

struct Importance {
  std::vector<double> raw;         // mean over trees
  std::vector<double> normalized;  // raw / sum(raw), zeros if the sum is 0
};

Importance MdiImportance(const std::vector<DecisionTree>& trees,
                         std::size_t n_features);
Importance MdiImportance(const ForestModel& model);
Importance MdiImportance(const GbmModel& model);

}  // namespace vscreen::ml

#endif  // VSCREEN_TREE_H_
