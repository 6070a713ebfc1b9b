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

// Train/evaluate orchestration: in-domain and out-of-domain protocols,
// run manifests and report files.

#ifndef VSCREEN_HARNESS_H_
#define VSCREEN_HARNESS_H_

#include <filesystem>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "vscreen/corpus.h"
#include "vscreen/explain.h"
#include "vscreen/features.h"
#include "vscreen/lexicon.h"
#include "vscreen/metrics.h"
#include "vscreen/model.h"
#include "vscreen/registry.h"
#include "vscreen/tagger.h"

namespace vscreen::harness {

// Flat "key = value" text; '#' starts a comment line. Keys keep file order.
class KeyValueConfig {
 public:
  static KeyValueConfig Parse(std::string_view text);
  static KeyValueConfig Load(const std::filesystem::path& path);
  const std::vector<std::pair<std::string, std::string>>& entries() const {
    return entries_;
  }

 private:
  std::vector<std::pair<std::string, std::string>> entries_;
};

struct HarnessConfig {
  ml::ModelConfig model;
  std::size_t workers = 1;
  // "grid.<param> = v1,v2,v3": candidate values tried on the validation split.
  std::map<std::string, std::vector<std::string>> grid;

  // Unknown keys and grids with more than three values are errors.
  static HarnessConfig FromKeyValues(const KeyValueConfig& kv);
};

// Everything the extractor needs, loaded from one asset directory. Not copyable: the extractor points into the other members.
class Toolkit {
 public:
  static std::unique_ptr<Toolkit> Load(const std::filesystem::path& assets_dir);

  const features::FeatureRegistry& registry() const { return registry_; }
  const features::FeatureResources& resources() const { return resources_; }
  const text::TextPipeline& pipeline() const { return *pipeline_; }
  const features::FeatureExtractor& extractor() const { return *extractor_; }

  std::vector<features::UserFeatureSeries> Extract(
      const std::vector<corpus::UserRecord>& users, std::size_t workers) const;

 private:
  Toolkit() = default;
  features::FeatureRegistry registry_;
  features::FeatureResources resources_;
  std::unique_ptr<text::TextPipeline> pipeline_;
  std::unique_ptr<features::FeatureExtractor> extractor_;
};

struct ExtractedSplit {
  std::vector<features::UserFeatureSeries> train, validation, test;
  // SHA-256 of each partition's serialized users.
  std::string train_digest, validation_digest, test_digest;
};

ExtractedSplit ExtractSplit(const corpus::DatasetSplit& split, const Toolkit& toolkit,
                            std::size_t workers);

std::string UsersDigest(const std::vector<corpus::UserRecord>& users);

// Throws if any user id appears in more than one partition.
void CheckNoLeakage(const ExtractedSplit& split);

// Everything that determines a run's outputs.
struct RunManifest {
  std::string kind;  // "indomain" or "ood"
  ml::ModelFamily family = ml::ModelFamily::kLogistic;
  std::vector<std::string> hyperparameters;
  uint64_t seed = 0;
  std::string registry_fingerprint;
  std::vector<std::pair<std::string, std::string>> corpus_digests;
  std::string fit_inputs_digest;  // SHA-256 over the training user ids
  std::optional<std::size_t> n_per_class;
  std::optional<uint64_t> sample_seed;
  std::optional<double> reference_f1;  // in-domain F1 for ood runs

  std::string ToJson() const;
  std::string Digest() const;
};

// ISO-8601 UTC time from SOURCE_DATE_EPOCH, or the epoch when it is unset,
// so repeated runs stay byte-identical.
std::string ReproducibleTimestamp();

struct InDomainResult {
  MetricsRow test;
  MetricsRow validation;
  ml::ModelArtifact artifact;
  std::vector<seq::EpochLog> training_log;
  RunManifest manifest;
  std::vector<std::string> selected;  // grid values chosen on validation
};

// Fits on train only, selects grid values by validation F1 and reports
// positive-class metrics on test.
InDomainResult RunInDomain(const ExtractedSplit& split,
                           const features::FeatureRegistry& registry,
                           ml::ModelFamily family, const HarnessConfig& config,
                           uint64_t seed);

struct OodResult {
  MetricsRow row;  // with change_f1
  RunManifest manifest;
  std::vector<std::string> sampled_users;
};

// Samples n_per_class positives and controls from `target` (fewer if the
// corpus is smaller), evaluates the in-domain artifact and reports
// change_f1 = ood_f1 - indomain_f1.
OodResult RunOod(const InDomainResult& indomain,
                 const features::FeatureRegistry& registry,
                 const std::vector<features::UserFeatureSeries>& target,
                 const std::string& target_digest, std::size_t n_per_class,
                 uint64_t seed);

// Same, from an artifact and a stored in-domain F1.
OodResult RunOodWithArtifact(const ml::ModelArtifact& artifact,
                             const RunManifest& indomain_manifest, double indomain_f1,
                             const features::FeatureRegistry& registry,
                             const std::vector<features::UserFeatureSeries>& target,
                             const std::string& target_digest, std::size_t n_per_class,
                             uint64_t seed);

// Indices of the sampled users, sorted.
std::vector<std::size_t> SampleBalanced(const std::vector<features::UserFeatureSeries>& users,
                                        std::size_t n_per_class, uint64_t seed);

// results.json ({model, precision, recall, f1, change_f1?, manifest_digest}),
// results.tsv, the metrics table text, manifest.json and, when given, the
// importance tables. Creates out_dir.
void EmitReport(const std::vector<MetricsRow>& rows,
                const explain::ImportanceReport* importance,
                const RunManifest& manifest, const std::filesystem::path& out_dir);

std::string FormatResultsJson(const std::vector<MetricsRow>& rows);
// Model, Precision, Recall, F1 and, if any row has it, Change F1.
std::string FormatMetricsTable(const std::vector<MetricsRow>& rows);

// Reads results.json back (for change_f1 against a stored run).
std::vector<MetricsRow> ReadResultsJson(const std::filesystem::path& path);

}  // namespace vscreen::harness

#endif  // VSCREEN_HARNESS_H_
