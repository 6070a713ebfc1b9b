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

// Model families behind one artifact type. Shallow families consume the
// per-user mean feature vector; the sequence family consumes the
// per-sentence series. Each artifact carries the standardizer fitted on
// its training rows.

#ifndef VSCREEN_MODEL_H_
#define VSCREEN_MODEL_H_

#include <filesystem>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "vscreen/bilstm.h"
#include "vscreen/features.h"
#include "vscreen/linear.h"
#include "vscreen/standardizer.h"
#include "vscreen/svm.h"
#include "vscreen/tree.h"

namespace vscreen::ml {

enum class ModelFamily { kLogistic, kForest, kSvm, kBoosting, kBiLstm };

inline constexpr ModelFamily kAllFamilies[] = {
    ModelFamily::kLogistic, ModelFamily::kForest, ModelFamily::kSvm,
    ModelFamily::kBoosting, ModelFamily::kBiLstm};

// "lr", "rf", "svm", "gb", "bilstm".
std::string_view FamilyTag(ModelFamily family);
ModelFamily ParseFamily(std::string_view tag);
// Display name used in report tables.
std::string_view FamilyName(ModelFamily family);

// Every hyperparameter of every family; defaults are the reference values.
struct ModelConfig {
  LogisticParams logistic;
  ForestParams forest;
  SvmParams svm;
  BoostingParams boosting;
  seq::BiLstmConfig bilstm;  // input_dim is filled in at training time
  seq::BiLstmTrainConfig bilstm_train;

  // Applies "family.param" = value. Returns false for an unknown key and
  // throws on a malformed value.
  bool Set(std::string_view key, std::string_view value);
  // Canonical "key=value" lines for the given family.
  std::vector<std::string> Describe(ModelFamily family) const;
};

using FamilyModel =
    std::variant<LinearModel, ForestModel, SvmModel, GbmModel, seq::BiLstmNet>;

class ModelArtifact {
 public:
  ModelFamily family = ModelFamily::kLogistic;
  std::string registry_fingerprint;
  std::vector<std::string> feature_codes;
  uint64_t seed = 0;
  Standardizer standardizer;  // user-level, or sentence-level for bilstm
  FamilyModel model;

  bool is_sequence() const { return family == ModelFamily::kBiLstm; }

  // Positive-class probabilities, one per user, in input order.
  Vector PredictUsers(const std::vector<features::UserFeatureSeries>& users) const;
  // Shallow families: rows are raw (unstandardized) user mean vectors.
  Vector PredictUserMatrix(const Matrix& raw) const;
  // Sequence family: raw per-sentence series.
  Vector PredictSeries(const std::vector<const features::UserFeatureSeries*>& users) const;

  // "VSCRN1" header, family tag, fingerprint, standardizer, payload.
  std::string Serialize() const;
  static ModelArtifact Parse(std::string_view contents);
  void Save(const std::filesystem::path& path) const;
  static ModelArtifact Load(const std::filesystem::path& path);
};

// Labels from probabilities; p >= threshold is positive.
std::vector<int> ThresholdLabels(const Vector& probabilities, double threshold = 0.5);

// Rows are users, columns are per-user means over defined cells.
Matrix UserMatrix(const std::vector<features::UserFeatureSeries>& users);
std::vector<int> UserLabels(const std::vector<features::UserFeatureSeries>& users);

// Per-column mean and population std over every defined sentence cell.
Standardizer FitSentenceStandardizer(
    const std::vector<features::UserFeatureSeries>& users);
// F x T standardized sequence, missing cells set to 0, cut at max_rows.
Matrix SeriesToSequence(const features::UserFeatureSeries& series,
                        const Standardizer& standardizer, int max_rows);

struct TrainOutput {
  ModelArtifact artifact;
  std::vector<seq::EpochLog> training_log;  // sequence family only
};

// `validation` drives early stopping for the sequence family and is unused
// by the shallow families.
TrainOutput TrainModel(ModelFamily family, const ModelConfig& config,
                       const features::FeatureRegistry& registry,
                       const std::vector<features::UserFeatureSeries>& train,
                       const std::vector<features::UserFeatureSeries>& validation,
                       uint64_t seed, std::size_t workers = 1);

}  // namespace vscreen::ml

#endif  // VSCREEN_MODEL_H_
