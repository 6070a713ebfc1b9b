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

#include "vscreen/bilstm.h"
#include "vscreen/common.h"

namespace vscreen::seq {
namespace {

BiLstmConfig Tiny() {
  BiLstmConfig c;
  c.input_dim = 3;
  c.hidden = 6;
  c.layers = 2;
  c.head_width = 8;
  c.head_layers = 2;
  c.dropout = 0.1;
  return c;
}

// Positive sequences drift upward in the first channel.
void Sequences(int n, uint64_t seed, std::vector<Matrix>& seqs, std::vector<int>& labels) {
  Rng rng(seed);
  for (int u = 0; u < n; ++u) {
    const int label = u % 2;
    const int len = 3 + static_cast<int>(UniformIndex(rng, 6));
    Matrix s(3, len);
    for (Eigen::Index i = 0; i < s.size(); ++i) s.data()[i] = 0.5 * StandardNormal(rng);
    for (int t = 0; t < len; ++t) s(0, t) += label ? 1.0 : -1.0;
    seqs.push_back(s);
    labels.push_back(label);
  }
}

TEST(OneCycle, Endpoints) {
  const OneCycleConfig c;
  EXPECT_NEAR(OneCycleLr(0, 100, c), 4e-4, 1e-15);
  EXPECT_NEAR(OneCycleLr(30, 100, c), 0.01, 1e-15);
  EXPECT_NEAR(OneCycleLr(100, 100, c), 4e-8, 1e-15);
  EXPECT_LT(OneCycleLr(15, 100, c), 0.01);
  EXPECT_THROW(OneCycleLr(101, 100, c), Error);
  EXPECT_THROW(OneCycleLr(0, 0, c), Error);
}

TEST(BiLstm, ConfigValidation) {
  BiLstmConfig c = Tiny();
  c.input_dim = 0;
  EXPECT_THROW(c.Validate(), Error);
  c = Tiny();
  c.dropout = 1.0;
  EXPECT_THROW(c.Validate(), Error);
}

TEST(BiLstm, ParameterLayout) {
  const BiLstmNet net(Tiny(), 1);
  const auto& p = net.params();
  EXPECT_EQ(p.front().name, "lstm.l0.fw.w_ih");
  EXPECT_EQ(p.front().value.rows(), 24);
  EXPECT_EQ(p.front().value.cols(), 3);
  EXPECT_EQ(p.back().name, "out.bias");
  std::size_t total = 0;
  for (const auto& t : p) total += static_cast<std::size_t>(t.value.size());
  EXPECT_EQ(total, net.parameter_count());
}

TEST(BiLstm, BatchingDoesNotChangePredictions) {
  const BiLstmNet net(Tiny(), 2);
  std::vector<Matrix> seqs;
  std::vector<int> labels;
  Sequences(7, 3, seqs, labels);
  std::vector<const Matrix*> all;
  for (const auto& s : seqs) all.push_back(&s);
  const Vector together = net.Logits(all);
  for (std::size_t i = 0; i < seqs.size(); ++i) {
    EXPECT_NEAR(net.Logits({&seqs[i]})(0), together(static_cast<Eigen::Index>(i)), 1e-12);
  }
}

TEST(BiLstm, SerializeRoundTrips) {
  const BiLstmNet net(Tiny(), 4);
  ArtifactWriter w;
  net.Serialize(w);
  ArtifactReader r(w.str());
  ArtifactWriter w2;
  BiLstmNet::Deserialize(r).Serialize(w2);
  EXPECT_EQ(w.str(), w2.str());
}

TEST(BiLstm, LearnsDriftAndIsReproducible) {
  std::vector<Matrix> train, val;
  std::vector<int> ytrain, yval;
  Sequences(96, 5, train, ytrain);
  Sequences(32, 6, val, yval);
  BiLstmTrainConfig tc;
  tc.epochs = 12;
  tc.seed = 11;
  const auto a = TrainBiLstm(train, ytrain, val, yval, Tiny(), tc);
  const auto b = TrainBiLstm(train, ytrain, val, yval, Tiny(), tc);
  ArtifactWriter wa, wb;
  a.net.Serialize(wa);
  b.net.Serialize(wb);
  EXPECT_EQ(wa.str(), wb.str());
  EXPECT_LT(a.best_val_loss, std::log(2.0) * 0.5);
  const Vector p = PredictSequences(a.net, val);
  int right = 0;
  for (Eigen::Index i = 0; i < p.size(); ++i) {
    right += (p(i) >= 0.5) == (yval[static_cast<std::size_t>(i)] == 1);
  }
  EXPECT_GE(right, 30);
  EXPECT_NE(FormatTrainingLog(a.log).find("epoch\ttrain_loss"), std::string::npos);
}

TEST(BiLstm, EarlyStoppingKeepsBestEpoch) {
  std::vector<Matrix> train, val;
  std::vector<int> ytrain, yval;
  Sequences(40, 7, train, ytrain);
  Sequences(20, 8, val, yval);
  BiLstmTrainConfig tc;
  tc.epochs = 30;
  tc.patience = 2;
  const auto r = TrainBiLstm(train, ytrain, val, yval, Tiny(), tc);
  double best = 1e300;
  for (const auto& e : r.log) best = std::min(best, e.val_loss);
  EXPECT_EQ(r.best_val_loss, best);
  EXPECT_NEAR(EvaluateLoss(r.net, val, yval), best, 1e-12);
}

}  // namespace
}  // namespace vscreen::seq
