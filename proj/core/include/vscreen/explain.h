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

// Group-level LIME surrogates and the submodular pick over them. A perturbation mask has one bit per feature group; a cleared bit
// replaces that group's columns with baseline values.

#ifndef VSCREEN_EXPLAIN_H_
#define VSCREEN_EXPLAIN_H_

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "vscreen/artifact.h"
#include "vscreen/features.h"
#include "vscreen/model.h"
#include "vscreen/registry.h"

namespace vscreen::explain {

using Mask = std::vector<uint8_t>;
using GroupColumns = std::vector<std::vector<std::size_t>>;

// Column lists of every group in registry order.
GroupColumns RegistryGroups(const features::FeatureRegistry& registry);

struct KernelConfig {
  double sigma = 0;
  // sigma = 0.75 * sqrt(d).
  static KernelConfig ForGroups(std::size_t d);
};

// exp(-D^2 / sigma^2) with D the number of cleared bits.
double ProximityKernel(const Mask& mask, const KernelConfig& kernel);

// Copy of x with the columns of every cleared group set to the baseline.
std::vector<double> PerturbInstance(const std::vector<double>& x, const Mask& mask,
                                    const std::vector<double>& baseline,
                                    const GroupColumns& groups);
// Same for every sentence of a series; replaced cells become defined.
features::UserFeatureSeries PerturbSeries(const features::UserFeatureSeries& series,
                                          const Mask& mask,
                                          const std::vector<double>& baseline,
                                          const GroupColumns& groups);

// Probability of the positive class for each mask of one instance.
using MaskPredictor = std::function<Vector(const std::vector<Mask>&)>;

// n uniform random masks over d bits; the first is always all ones.
std::vector<Mask> SampleMasks(std::size_t d, std::size_t n, uint64_t seed);

// Weighted least squares of y on the mask bits with an unpenalized
// intercept and a ridge term on the slopes. Returns the d slopes.
std::vector<double> FitWeightedLinear(const std::vector<Mask>& masks,
                                      const Vector& y, const Vector& weights,
                                      double ridge);

struct SurrogateConfig {
  std::size_t samples = 1000;
  double ridge = 1e-6;
};

// One row of surrogate weights for an instance. Throws when samples < d + 2.
std::vector<double> FitLocalSurrogate(const MaskPredictor& predict, std::size_t d,
                                      const SurrogateConfig& config,
                                      const KernelConfig& kernel, uint64_t seed);

// I_j = sqrt(sum_i |W_ij|) per column.
std::vector<double> GlobalImportance(const Matrix& weights);

// Coverage sum_j sqrt(sum_{i in picked} |W_ij|).
double PickCoverage(const Matrix& weights, const std::vector<std::size_t>& picked);

// Greedy coverage maximization over rows of `weights` with ids `ids`; picks
// up to `budget` rows, breaking gain ties by the lowest id. Returns ids in
// pick order. A budget of at least the row count picks every row.
std::vector<std::size_t> SubmodularPick(const Matrix& weights,
                                        const std::vector<std::size_t>& ids,
                                        std::size_t budget);

// Exhaustive best subset of size <= budget (small inputs only).
double BestSubsetCoverage(const Matrix& weights, std::size_t budget);

struct SpLimeConfig {
  SurrogateConfig surrogate;
  std::size_t budget = 200;
  std::size_t max_candidates = 0;  // 0 uses every training user
  bool zero_imputation = false;    // baseline 0 instead of training means
  uint64_t seed = 0;
  std::size_t workers = 1;
};

struct SpLimeResult {
  Matrix weights;  // candidates x groups
  std::vector<std::size_t> candidates;  // indices into the training users
  std::vector<std::size_t> picked;      // indices into the training users
  std::vector<double> i_values;         // over the picked rows
};

// Explains the artifact's model on training users: one surrogate per
// candidate, submodular pick, then global importance. The baseline is the
// artifact standardizer's means, which are fitted on training rows only.
SpLimeResult RunSpLime(const ml::ModelArtifact& model,
                       const features::FeatureRegistry& registry,
                       const std::vector<features::UserFeatureSeries>& train,
                       const SpLimeConfig& config);

struct GroupImportance {
  features::FeatureGroup group{};
  double i_value = 0;
  bool higher_in_positive = false;  // majority of the group's features
};

struct FeatureImportance {
  std::string code;
  std::string description;
  features::FeatureGroup group{};
  double raw = 0;
  double normalized = 0;
};

struct ImportanceReport {
  std::string explained_model;
  std::size_t instances = 0;
  std::size_t samples = 0;
  std::vector<GroupImportance> groups;      // descending I-value
  std::vector<FeatureImportance> features;  // descending MDI, top k
};

// Per group: true when more than half of its features have a higher
// positive-class mean than control mean in `raw` (training user means).
std::vector<bool> GroupDirections(const features::FeatureRegistry& registry,
                                  const Matrix& raw, const std::vector<int>& labels);

ImportanceReport BuildReport(const features::FeatureRegistry& registry,
                             const std::string& explained_model,
                             const std::vector<double>& i_values,
                             const std::vector<bool>& directions,
                             const ml::Importance* mdi, std::size_t top_k,
                             std::size_t instances, std::size_t samples);

// Machine-readable table: group, I_value, direction.
std::string FormatGroupTsv(const ImportanceReport& report);
// Human-readable group table and MDI feature table.
std::string FormatReportText(const ImportanceReport& report);

}  // namespace vscreen::explain

#endif  // VSCREEN_EXPLAIN_H_
