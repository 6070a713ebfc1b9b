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
#include "vscreen/explain.h"
#include "vscreen/harness.h"
#include "vscreen/metrics.h"
#include "vscreen/model.h"
#include "vscreen/synthetic.h"

namespace vscreen {
namespace {

const features::FeatureRegistry& Registry() {
  static const auto r = features::FeatureRegistry::Load(DefaultAssetsDir() / "registry.tsv");
  return r;
}

std::vector<features::UserFeatureSeries> Planted(uint64_t seed, std::size_t n = 40) {
  synth::PlantedConfig cfg;
  cfg.positives = n;
  cfg.controls = n;
  cfg.seed = seed;
  return synth::GeneratePlantedSeries(Registry(), cfg);
}

TEST(Metrics, CountsAndZeroDenominators) {
  const auto c = harness::CountConfusion({1, 1, 0, 0, 1}, {1, 0, 1, 0, 1});
  EXPECT_EQ(c.tp, 2u);
  EXPECT_EQ(c.fp, 1u);
  EXPECT_EQ(c.fn, 1u);
  EXPECT_EQ(c.tn, 1u);
  const auto none = harness::MetricsFromCounts(0, 0, 4);
  EXPECT_EQ(none.precision, 0.0);
  EXPECT_EQ(none.f1, 0.0);
  EXPECT_THROW(harness::ComputeMetrics({}, {}), Error);
  EXPECT_THROW(harness::ComputeMetrics({2}, {1}), Error);
  EXPECT_DOUBLE_EQ(harness::Accuracy({1, 0}, {1, 1}), 0.5);
}

TEST(ModelConfig, SetAndDescribe) {
  ml::ModelConfig c;
  EXPECT_TRUE(c.Set("rf.n_trees", "10"));
  EXPECT_EQ(c.forest.n_trees, 10);
  EXPECT_FALSE(c.Set("rf.unknown", "1"));
  EXPECT_THROW(c.Set("rf.n_trees", "many"), Error);
  const auto lines = c.Describe(ml::ModelFamily::kForest);
  EXPECT_NE(std::find(lines.begin(), lines.end(), "rf.n_trees=10"), lines.end());
  EXPECT_EQ(ml::ParseFamily("gb"), ml::ModelFamily::kBoosting);
  EXPECT_THROW(ml::ParseFamily("knn"), Error);
}

TEST(Artifact, EveryFamilyRoundTripsAndPredictsIdentically) {
  const auto users = Planted(1);
  ml::ModelConfig c;
  c.bilstm.hidden = 4;
  c.bilstm.layers = 1;
  c.bilstm.head_width = 4;
  c.bilstm.head_layers = 1;
  c.bilstm_train.epochs = 2;
  for (auto family : ml::kAllFamilies) {
    const auto out = ml::TrainModel(family, c, Registry(), users, users, 3);
    const auto text = out.artifact.Serialize();
    const auto back = ml::ModelArtifact::Parse(text);
    EXPECT_EQ(back.Serialize(), text) << ml::FamilyTag(family);
    EXPECT_TRUE(back.PredictUsers(users) == out.artifact.PredictUsers(users))
        << ml::FamilyTag(family);
    EXPECT_EQ(back.registry_fingerprint, Registry().fingerprint());
  }
}

TEST(Artifact, TruncatedFileFails) {
  const auto users = Planted(2);
  const auto out = ml::TrainModel(ml::ModelFamily::kLogistic, ml::ModelConfig{}, Registry(),
                                  users, users, 1);
  const auto text = out.artifact.Serialize();
  EXPECT_THROW(ml::ModelArtifact::Parse(text.substr(0, text.size() / 2)), Error);
}

TEST(Sequence, MissingCellsBecomeZeroAndLengthIsCapped) {
  features::UserFeatureSeries s;
  s.cols = 2;
  s.values = {1, 2, 3, 4, 5, 6};
  s.missing = {0, 1, 0, 0, 0, 0};
  Matrix x(3, 2);
  x << 1, 2, 3, 4, 5, 6;
  const auto std = ml::Standardizer::Fit(x);
  const Matrix seq = ml::SeriesToSequence(s, std, 2);
  EXPECT_EQ(seq.rows(), 2);
  EXPECT_EQ(seq.cols(), 2);
  EXPECT_EQ(seq(1, 0), 0.0);
  EXPECT_NEAR(seq(0, 0), -std::sqrt(1.5), 1e-12);
}

TEST(Explain, KernelMasksAndPerturbation) {
  const auto cfg = explain::KernelConfig::ForGroups(4);
  EXPECT_DOUBLE_EQ(cfg.sigma, 1.5);
  EXPECT_DOUBLE_EQ(explain::ProximityKernel({1, 1, 1, 1}, cfg), 1.0);
  const auto masks = explain::SampleMasks(5, 50, 7);
  ASSERT_EQ(masks.size(), 50u);
  EXPECT_EQ(masks[0], explain::Mask(5, 1));
  EXPECT_EQ(masks, explain::SampleMasks(5, 50, 7));
  const explain::GroupColumns groups = {{0, 2}, {1}};
  const auto p = explain::PerturbInstance({5, 6, 7}, {0, 1}, {1, 1, 1}, groups);
  EXPECT_EQ(p, (std::vector<double>{1, 6, 1}));
}

TEST(Explain, WeightedLinearRecoversExactModel) {
  const auto masks = explain::SampleMasks(3, 64, 2);
  Vector y(64), w(64);
  for (std::size_t i = 0; i < masks.size(); ++i) {
    y(static_cast<Eigen::Index>(i)) = 0.2 + 0.5 * masks[i][0] - 0.3 * masks[i][2];
    w(static_cast<Eigen::Index>(i)) = 1.0 + static_cast<double>(i % 3);
  }
  const auto slopes = explain::FitWeightedLinear(masks, y, w, 0.0);
  EXPECT_NEAR(slopes[0], 0.5, 1e-10);
  EXPECT_NEAR(slopes[1], 0.0, 1e-10);
  EXPECT_NEAR(slopes[2], -0.3, 1e-10);
}

TEST(Explain, SurrogateNeedsEnoughSamples) {
  const explain::MaskPredictor predict = [](const std::vector<explain::Mask>& m) {
    return Vector::Zero(static_cast<Eigen::Index>(m.size())).eval();
  };
  explain::SurrogateConfig sc;
  sc.samples = 4;
  EXPECT_THROW(explain::FitLocalSurrogate(predict, 3, sc, explain::KernelConfig::ForGroups(3), 1),
               Error);
}

TEST(Explain, GreedyPickWithinBoundOnRandomInstances) {
  Rng rng(12);
  for (int trial = 0; trial < 200; ++trial) {
    Matrix w(5, 4);
    for (Eigen::Index i = 0; i < w.size(); ++i) w.data()[i] = StandardNormal(rng);
    std::vector<std::size_t> ids = {0, 1, 2, 3, 4};
    for (std::size_t budget = 1; budget <= 3; ++budget) {
      const auto picked = explain::SubmodularPick(w, ids, budget);
      EXPECT_EQ(picked.size(), budget);
      EXPECT_GE(explain::PickCoverage(w, picked),
                (1 - 1 / std::exp(1.0)) * explain::BestSubsetCoverage(w, budget) - 1e-12);
    }
  }
}

TEST(Explain, PickTiesGoToLowestId) {
  Matrix w(3, 1);
  w << 1, 1, 1;
  EXPECT_EQ(explain::SubmodularPick(w, {7, 3, 5}, 1), (std::vector<std::size_t>{3}));
  EXPECT_EQ(explain::SubmodularPick(w, {7, 3, 5}, 9).size(), 3u);
}

TEST(Explain, ReportOrderingAndDirections) {
  const auto users = Planted(3);
  const auto dirs = explain::GroupDirections(Registry(), ml::UserMatrix(users),
                                             ml::UserLabels(users));
  EXPECT_TRUE(dirs[static_cast<std::size_t>(features::FeatureGroup::kEmotion)]);
  std::vector<double> iv(features::kNumFeatureGroups, 0.1);
  iv[3] = 0.9;
  const auto report = explain::BuildReport(Registry(), "Random Forest", iv, dirs, nullptr, 5,
                                           10, 1000);
  EXPECT_EQ(report.groups.front().group, static_cast<features::FeatureGroup>(3));
  EXPECT_NE(explain::FormatGroupTsv(report).find("group\tI_value"), std::string::npos);
  EXPECT_NE(explain::FormatReportText(report).find("Random Forest"), std::string::npos);
}

TEST(Explain, SpLimeZeroImputationChangesBaseline) {
  const auto users = Planted(4, 20);
  const auto out = ml::TrainModel(ml::ModelFamily::kLogistic, ml::ModelConfig{}, Registry(),
                                  users, users, 1);
  explain::SpLimeConfig c;
  c.surrogate.samples = 100;
  c.budget = 5;
  c.max_candidates = 10;
  const auto mean = explain::RunSpLime(out.artifact, Registry(), users, c);
  c.zero_imputation = true;
  const auto zero = explain::RunSpLime(out.artifact, Registry(), users, c);
  EXPECT_EQ(mean.candidates.size(), 10u);
  EXPECT_EQ(mean.picked.size(), 5u);
  EXPECT_EQ(mean.i_values.size(), features::kNumFeatureGroups);
  EXPECT_FALSE(mean.weights == zero.weights);
}

TEST(Harness, KeyValueConfig) {
  const auto kv = harness::KeyValueConfig::Parse("# comment\nworkers = 2\ngrid.rf.n_trees = 10,20\n"
                                                 "rf.max_depth = 4\n");
  const auto cfg = harness::HarnessConfig::FromKeyValues(kv);
  EXPECT_EQ(cfg.workers, 2u);
  EXPECT_EQ(cfg.model.forest.max_depth, 4);
  EXPECT_EQ(cfg.grid.at("rf.n_trees").size(), 2u);
  EXPECT_THROW(harness::HarnessConfig::FromKeyValues(
                   harness::KeyValueConfig::Parse("grid.rf.n_trees = 1,2,3,4\n")),
               Error);
  EXPECT_THROW(harness::HarnessConfig::FromKeyValues(harness::KeyValueConfig::Parse("x = 1\n")),
               Error);
  EXPECT_THROW(harness::KeyValueConfig::Parse("a = 1\na = 2\n"), Error);
}

TEST(Harness, InDomainAndOodProtocol) {
  const auto users = Planted(5, 50);
  harness::ExtractedSplit split;
  for (std::size_t i = 0; i < users.size(); ++i) {
    (i % 20 >= 18 ? split.test : i % 20 >= 16 ? split.validation : split.train)
        .push_back(users[i]);
  }
  harness::HarnessConfig cfg;
  cfg.grid["lr.C"] = {"0.01", "1"};
  const auto run = harness::RunInDomain(split, Registry(), ml::ModelFamily::kLogistic, cfg, 1);
  EXPECT_EQ(run.selected.size(), 1u);
  EXPECT_GT(run.test.f1, 0.8);
  EXPECT_EQ(run.test.manifest_digest, run.manifest.Digest());
  const auto ood = harness::RunOod(run, Registry(), Planted(6, 30), "digest", 10, 2);
  ASSERT_TRUE(ood.row.change_f1.has_value());
  EXPECT_NEAR(*ood.row.change_f1, ood.row.f1 - run.test.f1, 1e-15);
  EXPECT_EQ(ood.sampled_users.size(), 20u);
  EXPECT_EQ(ood.manifest.n_per_class, 10u);
}

TEST(Harness, LeakageCheck) {
  harness::ExtractedSplit split;
  split.train = Planted(7, 2);
  split.test = {split.train.front()};
  EXPECT_THROW(harness::CheckNoLeakage(split), Error);
}

TEST(Harness, ResultsJsonRoundTrip) {
  harness::MetricsRow row{"SVM", 0.5, 0.25, 1.0 / 3.0, -0.125, "abc"};
  const auto dir = std::filesystem::temp_directory_path() / "vscreen_results_test";
  std::filesystem::create_directories(dir);
  WriteFile(dir / "results.json", harness::FormatResultsJson({row}));
  const auto back = harness::ReadResultsJson(dir / "results.json");
  ASSERT_EQ(back.size(), 1u);
  EXPECT_EQ(back[0].f1, row.f1);
  EXPECT_EQ(back[0].change_f1, row.change_f1);
  EXPECT_NE(harness::FormatMetricsTable({row}).find("Change F1"), std::string::npos);
}

TEST(Synthetic, SeededAndLabelled) {
  auto cfg = synth::SeparableConfig(3);
  cfg.positives = 5;
  cfg.controls = 7;
  const auto a = synth::GenerateTextCorpus(cfg);
  const auto b = synth::GenerateTextCorpus(cfg);
  ASSERT_EQ(a.size(), 12u);
  EXPECT_EQ(corpus::SerializeUsers(a), corpus::SerializeUsers(b));
  EXPECT_EQ(std::count_if(a.begin(), a.end(),
                          [](const auto& u) { return u.label == corpus::Label::kPositive; }),
            5);
  const auto planted = Planted(8, 3);
  EXPECT_EQ(planted.size(), 6u);
  EXPECT_EQ(planted[0].cols, Registry().size());
}

}  // namespace
}  // namespace vscreen
