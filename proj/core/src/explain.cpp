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

#include "vscreen/explain.h"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>

#include "vscreen/common.h"

namespace vscreen::explain {
namespace {

// Distinct masks are predicted once; with few groups most samples repeat.
Vector PredictDeduplicated(const std::vector<Mask>& masks,
                           const std::function<Vector(const std::vector<Mask>&)>& fn) {
  std::map<Mask, Eigen::Index> slot;
  std::vector<Mask> unique;
  std::vector<Eigen::Index> index(masks.size());
  for (std::size_t i = 0; i < masks.size(); ++i) {
    const auto [it, inserted] =
        slot.emplace(masks[i], static_cast<Eigen::Index>(unique.size()));
    if (inserted) unique.push_back(masks[i]);
    index[i] = it->second;
  }
  const Vector unique_p = fn(unique);
  if (unique_p.size() != static_cast<Eigen::Index>(unique.size())) {
    throw Error("predictor returned the wrong number of probabilities");
  }
  Vector out(static_cast<Eigen::Index>(masks.size()));
  for (std::size_t i = 0; i < masks.size(); ++i) {
    out(static_cast<Eigen::Index>(i)) = unique_p(index[i]);
  }
  return out;
}

void CheckMask(const Mask& mask, const GroupColumns& groups) {
  if (mask.size() != groups.size()) {
    throw Error("mask has " + std::to_string(mask.size()) + " bits for " +
                std::to_string(groups.size()) + " groups");
  }
}

std::string FormatFixed(double v, int digits) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*f", digits, v);
  return buf;
}

}  // namespace

GroupColumns RegistryGroups(const features::FeatureRegistry& registry) {
  GroupColumns groups;
  for (std::size_t g = 0; g < features::kNumFeatureGroups; ++g) {
    groups.push_back(registry.GroupColumns(static_cast<features::FeatureGroup>(g)));
  }
  return groups;
}

KernelConfig KernelConfig::ForGroups(std::size_t d) {
  if (d == 0) throw Error("kernel needs at least one group");
  return KernelConfig{0.75 * std::sqrt(static_cast<double>(d))};
}

double ProximityKernel(const Mask& mask, const KernelConfig& kernel) {
  const double cleared =
      static_cast<double>(std::count(mask.begin(), mask.end(), uint8_t{0}));
  return std::exp(-(cleared * cleared) / (kernel.sigma * kernel.sigma));
}

std::vector<double> PerturbInstance(const std::vector<double>& x, const Mask& mask,
                                    const std::vector<double>& baseline,
                                    const GroupColumns& groups) {
  CheckMask(mask, groups);
  if (baseline.size() != x.size()) throw Error("baseline width differs from the instance");
  std::vector<double> out = x;
  for (std::size_t g = 0; g < groups.size(); ++g) {
    if (mask[g]) continue;
    for (std::size_t c : groups[g]) out[c] = baseline[c];
  }
  return out;
}

features::UserFeatureSeries PerturbSeries(const features::UserFeatureSeries& series,
                                          const Mask& mask,
                                          const std::vector<double>& baseline,
                                          const GroupColumns& groups) {
  CheckMask(mask, groups);
  if (baseline.size() != series.cols) throw Error("baseline width differs from the series");
  features::UserFeatureSeries out = series;
  for (std::size_t g = 0; g < groups.size(); ++g) {
    if (mask[g]) continue;
    for (std::size_t r = 0; r < out.rows(); ++r) {
      for (std::size_t c : groups[g]) {
        out.values[r * out.cols + c] = baseline[c];
        out.missing[r * out.cols + c] = 0;
      }
    }
  }
  return out;
}

std::vector<Mask> SampleMasks(std::size_t d, std::size_t n, uint64_t seed) {
  std::vector<Mask> masks;
  if (n == 0) return masks;
  masks.reserve(n);
  masks.emplace_back(d, uint8_t{1});
  Rng rng(seed);
  for (std::size_t i = 1; i < n; ++i) {
    Mask m(d);
    for (auto& bit : m) bit = static_cast<uint8_t>(rng() >> 63);
    masks.push_back(std::move(m));
  }
  return masks;
}

std::vector<double> FitWeightedLinear(const std::vector<Mask>& masks,
                                      const Vector& y, const Vector& weights,
                                      double ridge) {
  if (masks.empty()) throw Error("no samples for the surrogate fit");
  const auto d = static_cast<Eigen::Index>(masks.front().size());
  const auto n = static_cast<Eigen::Index>(masks.size());
  Matrix a(n, d + 1);
  for (Eigen::Index i = 0; i < n; ++i) {
    a(i, 0) = 1.0;
    for (Eigen::Index j = 0; j < d; ++j) {
      a(i, j + 1) = masks[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)];
    }
  }
  const Matrix aw = a.transpose() * weights.asDiagonal();
  Matrix normal = aw * a;
  normal.diagonal().tail(d).array() += ridge;
  const Vector rhs = aw * y;
  const Eigen::LDLT<Matrix> ldlt(normal);
  if (ldlt.info() != Eigen::Success || !ldlt.isPositive()) {
    throw Error("surrogate system is singular");
  }
  const Vector beta = ldlt.solve(rhs);
  if (!beta.allFinite()) throw Error("surrogate system is singular");
  return std::vector<double>(beta.data() + 1, beta.data() + 1 + d);
}

std::vector<double> FitLocalSurrogate(const MaskPredictor& predict, std::size_t d,
                                      const SurrogateConfig& config,
                                      const KernelConfig& kernel, uint64_t seed) {
  if (config.samples < d + 2) {
    throw Error("surrogate needs at least d + 2 = " + std::to_string(d + 2) + " samples");
  }
  const auto masks = SampleMasks(d, config.samples, seed);
  const Vector y = PredictDeduplicated(masks, predict);
  Vector w(static_cast<Eigen::Index>(masks.size()));
  for (std::size_t i = 0; i < masks.size(); ++i) {
    w(static_cast<Eigen::Index>(i)) = ProximityKernel(masks[i], kernel);
  }
  return FitWeightedLinear(masks, y, w, config.ridge);
}

std::vector<double> GlobalImportance(const Matrix& weights) {
  if (weights.rows() == 0) throw Error("no surrogate rows to aggregate");
  std::vector<double> out(static_cast<std::size_t>(weights.cols()));
  for (Eigen::Index j = 0; j < weights.cols(); ++j) {
    out[static_cast<std::size_t>(j)] = std::sqrt(weights.col(j).cwiseAbs().sum());
  }
  return out;
}

double PickCoverage(const Matrix& weights, const std::vector<std::size_t>& picked) {
  double total = 0;
  for (Eigen::Index j = 0; j < weights.cols(); ++j) {
    double s = 0;
    for (std::size_t i : picked) s += std::abs(weights(static_cast<Eigen::Index>(i), j));
    total += std::sqrt(s);
  }
  return total;
}

std::vector<std::size_t> SubmodularPick(const Matrix& weights,
                                        const std::vector<std::size_t>& ids,
                                        std::size_t budget) {
  if (budget == 0) throw Error("pick budget must be at least 1");
  const auto n = static_cast<std::size_t>(weights.rows());
  if (ids.size() != n) throw Error("one id per surrogate row is required");
  const Matrix absw = weights.cwiseAbs();
  Vector column_sum = Vector::Zero(weights.cols());
  std::vector<bool> taken(n, false);
  std::vector<std::size_t> picked;
  const std::size_t rounds = std::min(budget, n);
  for (std::size_t round = 0; round < rounds; ++round) {
    std::size_t best = n;
    double best_gain = -1;
    for (std::size_t i = 0; i < n; ++i) {
      if (taken[i]) continue;
      double gain = 0;
      for (Eigen::Index j = 0; j < weights.cols(); ++j) {
        const double s = column_sum(j);
        gain += std::sqrt(s + absw(static_cast<Eigen::Index>(i), j)) - std::sqrt(s);
      }
      const bool tie = best < n && std::abs(gain - best_gain) <= 1e-12 && ids[i] < ids[best];
      if (best == n || gain > best_gain + 1e-12 || tie) {
        best = i;
        best_gain = gain;
      }
    }
    taken[best] = true;
    column_sum += absw.row(static_cast<Eigen::Index>(best)).transpose();
    picked.push_back(ids[best]);
  }
  return picked;
}

double BestSubsetCoverage(const Matrix& weights, std::size_t budget) {
  const auto n = static_cast<std::size_t>(weights.rows());
  if (n > 20) throw Error("exhaustive subset search is limited to 20 rows");
  double best = 0;
  for (uint32_t bits = 0; bits < (1u << n); ++bits) {
    if (static_cast<std::size_t>(__builtin_popcount(bits)) > budget) continue;
    std::vector<std::size_t> subset;
    for (std::size_t i = 0; i < n; ++i) {
      if (bits & (1u << i)) subset.push_back(i);
    }
    best = std::max(best, PickCoverage(weights, subset));
  }
  return best;
}

SpLimeResult RunSpLime(const ml::ModelArtifact& model,
                       const features::FeatureRegistry& registry,
                       const std::vector<features::UserFeatureSeries>& train,
                       const SpLimeConfig& config) {
  if (train.empty()) throw Error("no training users to explain");
  if (model.registry_fingerprint != registry.fingerprint()) {
    throw Error("model and registry fingerprints differ");
  }
  const GroupColumns groups = RegistryGroups(registry);
  const std::size_t d = groups.size();
  const KernelConfig kernel = KernelConfig::ForGroups(d);
  std::vector<double> baseline(registry.size(), 0.0);
  if (!config.zero_imputation) {
    const Vector& means = model.standardizer.means();
    baseline.assign(means.data(), means.data() + means.size());
  }

  SpLimeResult result;
  result.candidates.resize(train.size());
  std::iota(result.candidates.begin(), result.candidates.end(), std::size_t{0});
  if (config.max_candidates > 0 && config.max_candidates < train.size()) {
    Rng rng(MixSeed(config.seed, 0xC4D));
    auto& c = result.candidates;
    for (std::size_t i = 0; i < config.max_candidates; ++i) {
      std::swap(c[i], c[i + UniformIndex(rng, c.size() - i)]);
    }
    c.resize(config.max_candidates);
    std::sort(c.begin(), c.end());
  }

  result.weights.resize(static_cast<Eigen::Index>(result.candidates.size()),
                        static_cast<Eigen::Index>(d));
  ParallelFor(result.candidates.size(), config.workers, [&](std::size_t k) {
    const std::size_t idx = result.candidates[k];
    const features::UserFeatureSeries& user = train[idx];
    MaskPredictor predict;
    if (model.is_sequence()) {
      predict = [&](const std::vector<Mask>& masks) {
        std::vector<features::UserFeatureSeries> perturbed;
        perturbed.reserve(masks.size());
        for (const auto& m : masks) perturbed.push_back(PerturbSeries(user, m, baseline, groups));
        std::vector<const features::UserFeatureSeries*> ptrs;
        for (const auto& p : perturbed) ptrs.push_back(&p);
        return model.PredictSeries(ptrs);
      };
    } else {
      const std::vector<double> x = features::AggregateUser(user);
      predict = [&, x](const std::vector<Mask>& masks) {
        Matrix rows(static_cast<Eigen::Index>(masks.size()),
                    static_cast<Eigen::Index>(x.size()));
        for (std::size_t i = 0; i < masks.size(); ++i) {
          const auto p = PerturbInstance(x, masks[i], baseline, groups);
          rows.row(static_cast<Eigen::Index>(i)) =
              Eigen::Map<const Eigen::RowVectorXd>(p.data(), static_cast<Eigen::Index>(p.size()));
        }
        return model.PredictUserMatrix(rows);
      };
    }
    const auto row = FitLocalSurrogate(predict, d, config.surrogate, kernel,
                                       MixSeed(config.seed, idx));
    for (std::size_t j = 0; j < d; ++j) {
      result.weights(static_cast<Eigen::Index>(k), static_cast<Eigen::Index>(j)) = row[j];
    }
  });

  result.picked = SubmodularPick(result.weights, result.candidates, config.budget);
  Matrix picked_rows(static_cast<Eigen::Index>(result.picked.size()),
                     static_cast<Eigen::Index>(d));
  for (std::size_t i = 0; i < result.picked.size(); ++i) {
    const auto pos = std::lower_bound(result.candidates.begin(), result.candidates.end(),
                                      result.picked[i]) - result.candidates.begin();
    picked_rows.row(static_cast<Eigen::Index>(i)) = result.weights.row(pos);
  }
  result.i_values = GlobalImportance(picked_rows);
  return result;
}

std::vector<bool> GroupDirections(const features::FeatureRegistry& registry,
                                  const Matrix& raw, const std::vector<int>& labels) {
  if (static_cast<std::size_t>(raw.rows()) != labels.size()) {
    throw Error("one label per user row is required");
  }
  Vector pos_sum = Vector::Zero(raw.cols()), neg_sum = Vector::Zero(raw.cols());
  double pos_n = 0, neg_n = 0;
  for (Eigen::Index i = 0; i < raw.rows(); ++i) {
    if (labels[static_cast<std::size_t>(i)] == 1) {
      pos_sum += raw.row(i).transpose();
      ++pos_n;
    } else {
      neg_sum += raw.row(i).transpose();
      ++neg_n;
    }
  }
  if (pos_n == 0 || neg_n == 0) throw Error("direction arrows need both classes");
  std::vector<bool> out;
  for (std::size_t g = 0; g < features::kNumFeatureGroups; ++g) {
    const auto& cols = registry.GroupColumns(static_cast<features::FeatureGroup>(g));
    std::size_t higher = 0;
    for (std::size_t c : cols) {
      const auto ci = static_cast<Eigen::Index>(c);
      if (pos_sum(ci) / pos_n > neg_sum(ci) / neg_n) ++higher;
    }
    out.push_back(2 * higher > cols.size());
  }
  return out;
}

ImportanceReport BuildReport(const features::FeatureRegistry& registry,
                             const std::string& explained_model,
                             const std::vector<double>& i_values,
                             const std::vector<bool>& directions,
                             const ml::Importance* mdi, std::size_t top_k,
                             std::size_t instances, std::size_t samples) {
  if (i_values.size() != features::kNumFeatureGroups ||
      directions.size() != features::kNumFeatureGroups) {
    throw Error("one importance value and direction per group is required");
  }
  ImportanceReport report;
  report.explained_model = explained_model;
  report.instances = instances;
  report.samples = samples;
  for (std::size_t g = 0; g < i_values.size(); ++g) {
    report.groups.push_back({static_cast<features::FeatureGroup>(g), i_values[g],
                             directions[g]});
  }
  std::stable_sort(report.groups.begin(), report.groups.end(),
                   [](const GroupImportance& a, const GroupImportance& b) {
                     return a.i_value > b.i_value;
                   });
  if (mdi != nullptr) {
    if (mdi->raw.size() != registry.size()) throw Error("MDI width differs from the registry");
    std::vector<std::size_t> order(registry.size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
      return mdi->raw[a] > mdi->raw[b];
    });
    order.resize(std::min(top_k, order.size()));
    for (std::size_t c : order) {
      const auto& spec = registry[c];
      report.features.push_back(
          {spec.code, spec.description, spec.group, mdi->raw[c], mdi->normalized[c]});
    }
  }
  return report;
}

std::string FormatGroupTsv(const ImportanceReport& report) {
  std::string out = "group\tI_value\tdirection\n";
  for (const auto& g : report.groups) {
    out += std::string(features::FeatureGroupName(g.group)) + "\t" +
           FormatShort(g.i_value) + "\t" + (g.higher_in_positive ? "up" : "down") + "\n";
  }
  return out;
}

std::string FormatReportText(const ImportanceReport& report) {
  std::string out;
  out += "Explained model: " + report.explained_model + "\n";
  out += "Instances: " + std::to_string(report.instances) +
         ", perturbation samples per instance: " + std::to_string(report.samples) + "\n\n";
  out += "Feature Group\tI-value\t\n";
  for (const auto& g : report.groups) {
    out += std::string(features::FeatureGroupName(g.group)) + "\t" +
           FormatFixed(g.i_value, 4) + "\t" +
           (g.higher_in_positive ? "↑" : "↓") + "\n";
  }
  if (!report.features.empty()) {
    out += "\nFeature\tName\tCategory\tImportance\n";
    for (const auto& f : report.features) {
      out += f.code + "\t" + f.description + "\t" +
             std::string(features::FeatureGroupName(f.group)) + "\t" +
             FormatFixed(f.normalized, 4) + "\n";
    }
  }
  return out;
}

}  // namespace vscreen::explain
