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

#include <gtest/gtest.h>

#include <cmath>

#include "vscreen/common.h"
#include "vscreen/linear.h"
#include "vscreen/svm.h"
#include "vscreen/tree.h"

namespace vscreen::ml {
namespace {

// Two Gaussian blobs separated along the first column.
void Blobs(int n, int f, double gap, uint64_t seed, Matrix& x, std::vector<int>& y) {
  Rng rng(seed);
  x.resize(n, f);
  y.resize(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) {
    y[static_cast<std::size_t>(i)] = i % 2;
    for (int j = 0; j < f; ++j) x(i, j) = StandardNormal(rng);
    x(i, 0) += (i % 2 ? gap : -gap);
  }
}

double Accuracy(const Vector& p, const std::vector<int>& y) {
  double right = 0;
  for (Eigen::Index i = 0; i < p.size(); ++i) {
    right += (p(i) >= 0.5) == (y[static_cast<std::size_t>(i)] == 1);
  }
  return right / static_cast<double>(p.size());
}

TEST(Logistic, SeparatesBlobsAndConverges) {
  Matrix x;
  std::vector<int> y;
  Blobs(200, 5, 2.0, 1, x, y);
  LogisticParams p;
  p.C = 1.0;
  const auto model = TrainLogisticElastic(x, y, p, 3);
  EXPECT_TRUE(model.converged());
  EXPECT_GT(Accuracy(model.PredictProba(x), y), 0.95);
  EXPECT_GT(model.weights()(0), 0.0);
}

TEST(Logistic, StrongL1ZeroesNoiseWeights) {
  Matrix x;
  std::vector<int> y;
  Blobs(300, 8, 2.0, 2, x, y);
  LogisticParams p;
  p.C = 0.05;
  p.l1_ratio = 0.9;
  const auto model = TrainLogisticElastic(x, y, p, 1);
  int zeros = 0;
  for (Eigen::Index j = 1; j < model.weights().size(); ++j) zeros += model.weights()(j) == 0.0;
  EXPECT_GE(zeros, 4);
  EXPECT_NE(model.weights()(0), 0.0);
}

TEST(Logistic, ObjectiveDecreasesFromZero) {
  Matrix x;
  std::vector<int> y;
  Blobs(100, 3, 1.0, 4, x, y);
  const LogisticParams p;
  const auto model = TrainLogisticElastic(x, y, p, 2);
  EXPECT_LT(LogisticObjective(x, y, model.weights(), model.bias(), p),
            LogisticObjective(x, y, Vector::Zero(3), 0.0, p));
}

TEST(Logistic, RejectsBadLabels) {
  Matrix x = Matrix::Zero(3, 2);
  EXPECT_THROW(CheckBinaryLabels(x, {0, 2, 1}), Error);
  EXPECT_THROW(CheckBinaryLabels(x, {0, 1}), Error);
}

TEST(Tree, PureNodeStopsAndSerializeRoundTrips) {
  Matrix x(6, 2);
  x << 0, 5, 1, 4, 2, 3, 3, 2, 4, 1, 5, 0;
  const auto tree = GrowTree(x, {0, 0, 0, 1, 1, 1}, {0, 1, 2, 3, 4, 5}, TreeGrowParams{}, 1);
  EXPECT_EQ(tree.leaf_count(), 2);
  EXPECT_EQ(tree.depth(), 1);
  const double row[2] = {4.5, 0};
  EXPECT_EQ(tree.Predict(row), 1.0);
  ArtifactWriter w;
  tree.Serialize(w);
  ArtifactReader r(w.str());
  ArtifactWriter w2;
  DecisionTree::Deserialize(r).Serialize(w2);
  EXPECT_EQ(w.str(), w2.str());
}

TEST(Tree, MaxDepthIsRespected) {
  Matrix x;
  std::vector<int> y;
  Blobs(200, 4, 0.3, 5, x, y);
  std::vector<double> t(y.begin(), y.end());
  std::vector<int> rows(200);
  for (int i = 0; i < 200; ++i) rows[static_cast<std::size_t>(i)] = i;
  TreeGrowParams p;
  p.max_depth = 3;
  EXPECT_LE(GrowTree(x, t, rows, p, 1).depth(), 3);
}

TEST(Forest, FitsBlobsAndRanksSignalFeature) {
  Matrix x;
  std::vector<int> y;
  Blobs(300, 6, 1.5, 6, x, y);
  const auto forest = TrainRandomForest(x, y, ForestParams{}, 9, 2);
  EXPECT_GT(Accuracy(forest.PredictProba(x), y), 0.95);
  const auto imp = MdiImportance(forest);
  EXPECT_EQ(std::max_element(imp.raw.begin(), imp.raw.end()) - imp.raw.begin(), 0);
  double sum = 0;
  for (double v : imp.normalized) sum += v;
  EXPECT_NEAR(sum, 1.0, 1e-12);
}

TEST(Forest, WorkerCountDoesNotChangeTheModel) {
  Matrix x;
  std::vector<int> y;
  Blobs(120, 4, 1.0, 7, x, y);
  ArtifactWriter a, b;
  TrainRandomForest(x, y, ForestParams{}, 3, 1).Serialize(a);
  TrainRandomForest(x, y, ForestParams{}, 3, 4).Serialize(b);
  EXPECT_EQ(a.str(), b.str());
}

TEST(Boosting, LossDecreasesAndFits) {
  Matrix x;
  std::vector<int> y;
  Blobs(200, 4, 1.0, 8, x, y);
  const auto gbm = TrainGradientBoosting(x, y, BoostingParams{}, 1);
  const auto& trace = gbm.loss_trace();
  ASSERT_GE(trace.size(), 2u);
  EXPECT_LT(trace.back(), trace.front());
  EXPECT_GT(Accuracy(gbm.PredictProba(x), y), 0.9);
}

TEST(Svm, KernelAndGamma) {
  Matrix x(2, 2);
  x << 0, 0, 1, 1;
  EXPECT_NEAR(RbfKernel(Vector(x.row(0).transpose()), Vector(x.row(1).transpose()), 0.5), std::exp(-1.0), 1e-15);
  EXPECT_NEAR(ScaleGamma(x), 1.0 / (2 * 0.25), 1e-15);
  EXPECT_EQ(ScaleGamma(Matrix::Ones(3, 2)), 1.0);
}

TEST(Svm, DualIsMonotoneAndKktHolds) {
  Matrix x;
  std::vector<int> y;
  Blobs(150, 3, 1.2, 9, x, y);
  const auto svm = TrainSvmRbf(x, y, SvmParams{}, 0);
  const auto& trace = svm.dual_trace();
  for (std::size_t i = 1; i < trace.size(); ++i) EXPECT_GE(trace[i], trace[i - 1] - 1e-9);
  EXPECT_LT(svm.kkt_gap(), SvmParams{}.tol);
  EXPECT_GT(Accuracy(svm.PredictProba(x), y), 0.85);
  double balance = 0;
  for (Eigen::Index i = 0; i < svm.dual_coef().size(); ++i) balance += svm.dual_coef()(i);
  EXPECT_NEAR(balance, 0.0, 1e-9);
}

}  // namespace
}  // namespace vscreen::ml
