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

#include "vscreen/harness.h"

#include <algorithm>
#include <cstdlib>
#include <ctime>
#include <unordered_set>

#include <json.hpp>
#include <spdlog/spdlog.h>

#include "vscreen/common.h"

namespace vscreen::harness {
namespace {

using Json = nlohmann::ordered_json;

constexpr std::size_t kMaxGridValues = 3;

std::string Fixed(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.4f", v);
  return buf;
}

std::vector<std::string> Ids(const std::vector<features::UserFeatureSeries>& users) {
  std::vector<std::string> ids;
  ids.reserve(users.size());
  for (const auto& u : users) ids.push_back(u.user_id);
  return ids;
}

std::string IdsDigest(std::vector<std::string> ids) {
  std::sort(ids.begin(), ids.end());
  std::string joined;
  for (const auto& id : ids) joined += id + "\n";
  return Sha256Hex(joined);
}

// Grid combinations for one family in key order; a single empty
// combination when the family has no grid keys.
std::vector<std::vector<std::pair<std::string, std::string>>> GridCombos(
    const HarnessConfig& config, ml::ModelFamily family) {
  const std::string prefix = std::string(ml::FamilyTag(family)) + ".";
  std::vector<std::vector<std::pair<std::string, std::string>>> combos{{}};
  for (const auto& [key, values] : config.grid) {
    if (key.rfind(prefix, 0) != 0) continue;
    std::vector<std::vector<std::pair<std::string, std::string>>> next;
    for (const auto& combo : combos) {
      for (const auto& v : values) {
        auto c = combo;
        c.emplace_back(key, v);
        next.push_back(std::move(c));
      }
    }
    combos = std::move(next);
  }
  return combos;
}

MetricsRow Evaluate(const ml::ModelArtifact& artifact,
                    const std::vector<features::UserFeatureSeries>& users) {
  const Vector p = artifact.PredictUsers(users);
  return ComputeMetrics(ml::UserLabels(users), ml::ThresholdLabels(p));
}

Json RowJson(const MetricsRow& row) {
  Json j;
  j["model"] = row.model;
  j["precision"] = row.precision;
  j["recall"] = row.recall;
  j["f1"] = row.f1;
  if (row.change_f1) j["change_f1"] = *row.change_f1;
  j["manifest_digest"] = row.manifest_digest;
  return j;
}

}  // namespace

KeyValueConfig KeyValueConfig::Parse(std::string_view text) {
  KeyValueConfig kv;
  std::size_t line_no = 0;
  for (const auto& raw : Split(text, '\n')) {
    ++line_no;
    const auto line = Trim(raw);
    if (line.empty() || line.front() == '#') continue;
    const auto eq = line.find('=');
    if (eq == std::string_view::npos) {
      throw Error("config line " + std::to_string(line_no) + ": expected key = value");
    }
    const std::string key(Trim(line.substr(0, eq)));
    const std::string value(Trim(line.substr(eq + 1)));
    if (key.empty()) throw Error("config line " + std::to_string(line_no) + ": empty key");
    for (const auto& [k, v] : kv.entries_) {
      if (k == key) throw Error("config key repeated: " + key);
    }
    kv.entries_.emplace_back(key, value);
  }
  return kv;
}

KeyValueConfig KeyValueConfig::Load(const std::filesystem::path& path) {
  try {
    return Parse(ReadFile(path));
  } catch (const Error& e) {
    throw Error(path.string() + ": " + e.what());
  }
}

HarnessConfig HarnessConfig::FromKeyValues(const KeyValueConfig& kv) {
  HarnessConfig c;
  for (const auto& [key, value] : kv.entries()) {
    if (key == "workers") {
      c.workers = static_cast<std::size_t>(std::stoul(value));
      continue;
    }
    if (key.rfind("grid.", 0) == 0) {
      const std::string param = key.substr(5);
      std::vector<std::string> values;
      for (const auto& v : Split(value, ',')) values.emplace_back(Trim(v));
      if (values.empty() || values.size() > kMaxGridValues) {
        throw Error("grid " + param + " must list between 1 and 3 values");
      }
      // Validate every value now rather than mid-run.
      ml::ModelConfig probe;
      for (const auto& v : values) {
        if (!probe.Set(param, v)) throw Error("unknown grid parameter: " + param);
      }
      c.grid[param] = std::move(values);
      continue;
    }
    if (!c.model.Set(key, value)) throw Error("unknown config key: " + key);
  }
  return c;
}

std::unique_ptr<Toolkit> Toolkit::Load(const std::filesystem::path& assets_dir) {
  std::unique_ptr<Toolkit> t(new Toolkit());
  t->registry_ = features::FeatureRegistry::Load(assets_dir / "registry.tsv");
  t->resources_ = features::FeatureResources::Load(assets_dir);
  t->pipeline_ = std::make_unique<text::TextPipeline>(text::TextPipeline::Load(assets_dir));
  t->extractor_ = std::make_unique<features::FeatureExtractor>(t->registry_, t->resources_);
  return t;
}

std::vector<features::UserFeatureSeries> Toolkit::Extract(
    const std::vector<corpus::UserRecord>& users, std::size_t workers) const {
  return features::ExtractUsers(users, *pipeline_, *extractor_, workers);
}

std::string UsersDigest(const std::vector<corpus::UserRecord>& users) {
  return Sha256Hex(corpus::SerializeUsers(users));
}

ExtractedSplit ExtractSplit(const corpus::DatasetSplit& split, const Toolkit& toolkit,
                            std::size_t workers) {
  ExtractedSplit out;
  out.train = toolkit.Extract(split.train, workers);
  out.validation = toolkit.Extract(split.validation, workers);
  out.test = toolkit.Extract(split.test, workers);
  out.train_digest = UsersDigest(split.train);
  out.validation_digest = UsersDigest(split.validation);
  out.test_digest = UsersDigest(split.test);
  return out;
}

void CheckNoLeakage(const ExtractedSplit& split) {
  std::unordered_set<std::string> seen;
  for (const auto* part : {&split.train, &split.validation, &split.test}) {
    for (const auto& u : *part) {
      if (!seen.insert(u.user_id).second) {
        throw Error("leakage guard: user " + u.user_id +
                    " appears in more than one partition");
      }
    }
  }
}

std::string ReproducibleTimestamp() {
  std::time_t t = 0;
  if (const char* env = std::getenv("SOURCE_DATE_EPOCH")) {
    try {
      t = static_cast<std::time_t>(std::stoll(env));
    } catch (const std::exception&) {
      throw Error("SOURCE_DATE_EPOCH is not an integer");
    }
  }
  std::tm tm{};
  gmtime_r(&t, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

std::string RunManifest::ToJson() const {
  Json j;
  j["format"] = "vscreen-run/1";
  j["kind"] = kind;
  j["model"] = std::string(ml::FamilyTag(family));
  Json hp = Json::object();
  for (const auto& line : hyperparameters) {
    const auto eq = line.find('=');
    hp[line.substr(0, eq)] = line.substr(eq + 1);
  }
  j["hyperparameters"] = std::move(hp);
  j["seed"] = seed;
  j["split_ratio"] = "8:1:1";
  j["registry_fingerprint"] = registry_fingerprint;
  Json corpora = Json::object();
  for (const auto& [name, digest] : corpus_digests) corpora[name] = digest;
  j["corpus_digests"] = std::move(corpora);
  j["fit_inputs_digest"] = fit_inputs_digest;
  if (n_per_class) j["n_per_class"] = *n_per_class;
  if (sample_seed) j["sample_seed"] = *sample_seed;
  if (reference_f1) j["reference_f1"] = *reference_f1;
  j["timestamp"] = ReproducibleTimestamp();
  return j.dump(2) + "\n";
}

std::string RunManifest::Digest() const { return Sha256Hex(ToJson()); }

InDomainResult RunInDomain(const ExtractedSplit& split,
                           const features::FeatureRegistry& registry,
                           ml::ModelFamily family, const HarnessConfig& config,
                           uint64_t seed) {
  CheckNoLeakage(split);
  if (split.train.empty() || split.test.empty()) {
    throw Error("in-domain run needs training and test users");
  }
  const auto combos = GridCombos(config, family);
  std::optional<InDomainResult> best;
  for (const auto& combo : combos) {
    ml::ModelConfig mc = config.model;
    std::vector<std::string> chosen;
    for (const auto& [key, value] : combo) {
      mc.Set(key, value);
      chosen.push_back(key + "=" + value);
    }
    auto trained = ml::TrainModel(family, mc, registry, split.train, split.validation,
                                  seed, config.workers);
    InDomainResult r;
    r.artifact = std::move(trained.artifact);
    r.training_log = std::move(trained.training_log);
    r.selected = chosen;
    if (!split.validation.empty()) r.validation = Evaluate(r.artifact, split.validation);
    r.manifest.hyperparameters = mc.Describe(family);
    if (combos.size() > 1) {
      spdlog::info("{} grid [{}]: validation F1 {:.4f}", ml::FamilyTag(family),
                   fmt::join(chosen, ", "), r.validation.f1);
    }
    if (!best || r.validation.f1 > best->validation.f1) best = std::move(r);
  }
  InDomainResult result = std::move(*best);
  result.test = Evaluate(result.artifact, split.test);
  RunManifest& m = result.manifest;
  m.kind = "indomain";
  m.family = family;
  m.seed = seed;
  m.registry_fingerprint = registry.fingerprint();
  m.corpus_digests = {{"train", split.train_digest},
                      {"validation", split.validation_digest},
                      {"test", split.test_digest}};
  m.fit_inputs_digest = IdsDigest(Ids(split.train));
  const std::string digest = m.Digest();
  result.test.model = std::string(ml::FamilyName(family));
  result.test.manifest_digest = digest;
  result.validation.model = result.test.model;
  result.validation.manifest_digest = digest;
  return result;
}

std::vector<std::size_t> SampleBalanced(const std::vector<features::UserFeatureSeries>& users,
                                        std::size_t n_per_class, uint64_t seed) {
  std::vector<std::size_t> by_label[2];
  for (std::size_t i = 0; i < users.size(); ++i) {
    by_label[users[i].label == 1 ? 1 : 0].push_back(i);
  }
  std::vector<std::size_t> out;
  for (int label = 0; label < 2; ++label) {
    auto& pool = by_label[label];
    const std::size_t take = std::min(n_per_class, pool.size());
    if (take < n_per_class) {
      spdlog::warn("only {} users with label {} available, wanted {}", pool.size(), label,
                   n_per_class);
    }
    Rng rng(MixSeed(seed, static_cast<uint64_t>(label)));
    for (std::size_t i = 0; i < take; ++i) {
      std::swap(pool[i], pool[i + UniformIndex(rng, pool.size() - i)]);
    }
    out.insert(out.end(), pool.begin(), pool.begin() + static_cast<std::ptrdiff_t>(take));
  }
  std::sort(out.begin(), out.end());
  return out;
}

OodResult RunOodWithArtifact(const ml::ModelArtifact& artifact,
                             const RunManifest& indomain_manifest, double indomain_f1,
                             const features::FeatureRegistry& registry,
                             const std::vector<features::UserFeatureSeries>& target,
                             const std::string& target_digest, std::size_t n_per_class,
                             uint64_t seed) {
  if (artifact.registry_fingerprint != registry.fingerprint() ||
      indomain_manifest.registry_fingerprint != registry.fingerprint()) {
    throw Error("registry fingerprint mismatch between the training run and the test corpus");
  }
  const auto idx = SampleBalanced(target, n_per_class, seed);
  if (idx.empty()) throw Error("out-of-domain corpus has no users");
  std::vector<features::UserFeatureSeries> sample;
  sample.reserve(idx.size());
  OodResult out;
  for (std::size_t i : idx) {
    sample.push_back(target[i]);
    out.sampled_users.push_back(target[i].user_id);
  }
  out.row = Evaluate(artifact, sample);
  out.row.change_f1 = out.row.f1 - indomain_f1;
  RunManifest& m = out.manifest;
  m = indomain_manifest;
  m.kind = "ood";
  m.corpus_digests.emplace_back("ood_test", target_digest);
  m.corpus_digests.emplace_back("ood_sample", IdsDigest(out.sampled_users));
  m.n_per_class = n_per_class;
  m.reference_f1 = indomain_f1;
  m.sample_seed = seed;
  out.row.model = std::string(ml::FamilyName(artifact.family));
  out.row.manifest_digest = m.Digest();
  return out;
}

OodResult RunOod(const InDomainResult& indomain,
                 const features::FeatureRegistry& registry,
                 const std::vector<features::UserFeatureSeries>& target,
                 const std::string& target_digest, std::size_t n_per_class,
                 uint64_t seed) {
  return RunOodWithArtifact(indomain.artifact, indomain.manifest, indomain.test.f1,
                            registry, target, target_digest, n_per_class, seed);
}

std::string FormatResultsJson(const std::vector<MetricsRow>& rows) {
  Json arr = Json::array();
  for (const auto& r : rows) arr.push_back(RowJson(r));
  return arr.dump(2) + "\n";
}

std::vector<MetricsRow> ReadResultsJson(const std::filesystem::path& path) {
  const Json arr = Json::parse(ReadFile(path));
  std::vector<MetricsRow> rows;
  for (const auto& j : arr) {
    MetricsRow r;
    r.model = j.at("model").get<std::string>();
    r.precision = j.at("precision").get<double>();
    r.recall = j.at("recall").get<double>();
    r.f1 = j.at("f1").get<double>();
    if (j.contains("change_f1")) r.change_f1 = j.at("change_f1").get<double>();
    r.manifest_digest = j.at("manifest_digest").get<std::string>();
    rows.push_back(std::move(r));
  }
  return rows;
}

std::string FormatMetricsTable(const std::vector<MetricsRow>& rows) {
  const bool change = std::any_of(rows.begin(), rows.end(),
                                  [](const MetricsRow& r) { return r.change_f1.has_value(); });
  std::string out = change ? "Model\tPrecision\tRecall\tF1\tChange F1\n"
                           : "Model\tPrecision\tRecall\tF1\n";
  for (const auto& r : rows) {
    out += r.model + "\t" + Fixed(r.precision) + "\t" + Fixed(r.recall) + "\t" + Fixed(r.f1);
    if (change) {
      out += "\t";
      if (r.change_f1) out += (*r.change_f1 >= 0 ? "+" : "") + Fixed(*r.change_f1);
    }
    out += "\n";
  }
  return out;
}

void EmitReport(const std::vector<MetricsRow>& rows,
                const explain::ImportanceReport* importance,
                const RunManifest& manifest, const std::filesystem::path& out_dir) {
  if (rows.empty() && importance == nullptr) throw Error("nothing to report");
  std::error_code ec;
  std::filesystem::create_directories(out_dir, ec);
  if (ec) throw Error("cannot create report directory " + out_dir.string() + ": " + ec.message());
  if (!rows.empty()) {
    WriteFile(out_dir / "results.json", FormatResultsJson(rows));
    WriteFile(out_dir / "results.tsv", FormatMetricsTable(rows));
  }
  WriteFile(out_dir / "manifest.json", manifest.ToJson());
  if (importance != nullptr) {
    WriteFile(out_dir / "importance_groups.tsv", explain::FormatGroupTsv(*importance));
    WriteFile(out_dir / "importance.txt", explain::FormatReportText(*importance));
  }
}

}  // namespace vscreen::harness
