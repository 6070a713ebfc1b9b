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

// vscreen command-line front end.

#include <cstdio>
#include <filesystem>
#include <iostream>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>
#include <spdlog/spdlog.h>

#include "vscreen/common.h"
#include "vscreen/corpus.h"
#include "vscreen/explain.h"
#include "vscreen/features.h"
#include "vscreen/harness.h"
#include "vscreen/model.h"
#include "vscreen/synthetic.h"
#include "vscreen/tagger.h"

namespace fs = std::filesystem;
using namespace vscreen;

namespace {

struct Globals {
  std::string assets;
  std::size_t workers = 1;
  std::string log_level = "info";
};

fs::path AssetsDir(const Globals& g) {
  return g.assets.empty() ? DefaultAssetsDir() : fs::path(g.assets);
}

harness::HarnessConfig LoadConfig(const std::string& path, const Globals& g) {
  harness::HarnessConfig c;
  if (!path.empty()) c = harness::HarnessConfig::FromKeyValues(harness::KeyValueConfig::Load(path));
  if (g.workers != 0) c.workers = g.workers;
  return c;
}

// Directory corpora are split; a single file is treated as all-test.
corpus::DatasetSplit ReadEvaluationSplit(const fs::path& path) {
  if (fs::is_directory(path)) return corpus::ReadSplit(path);
  corpus::DatasetSplit split;
  split.test = corpus::ReadUsers(path);
  return split;
}

void WriteTrainOutputs(const harness::InDomainResult& r, const fs::path& out) {
  fs::create_directories(out);
  r.artifact.Save(out / "model.vscrn");
  if (!r.training_log.empty()) {
    WriteFile(out / "training_log.tsv", seq::FormatTrainingLog(r.training_log));
  }
  harness::EmitReport({r.test}, nullptr, r.manifest, out);
  WriteFile(out / "validation.json", harness::FormatResultsJson({r.validation}));
}

int BuildCorpusCmd(const Globals& g, const std::string& positives, const std::string& candidates,
                   const std::string& patterns, const std::string& exclusions, int min_sentences,
                   uint64_t seed, const std::string& out) {
  const fs::path assets = AssetsDir(g);
  const auto pattern = patterns.empty()
                           ? corpus::DiagnosisPattern::Load(assets / "diagnosis_patterns.txt")
                           : corpus::DiagnosisPattern::Load(patterns);
  const auto excl = corpus::ExclusionSet::Load(
      exclusions.empty() ? assets / "exclusions.txt" : fs::path(exclusions));
  const auto abbrev = text::Abbreviations::Load(assets / "abbreviations.txt");
  corpus::BuildOptions options;
  options.min_sentences = min_sentences;
  const auto build = corpus::BuildCorpus(corpus::ReadRawPosts(positives),
                                         corpus::ReadRawPosts(candidates), pattern, excl,
                                         abbrev, options, seed);
  // Leakage scan over the retained positive posts.
  int leaks = 0;
  for (const auto& u : build.users) {
    if (u.label != corpus::Label::kPositive) continue;
    for (const auto& p : u.posts) leaks += corpus::MatchDiagnosis(p.text, pattern).has_value();
  }
  const auto split = corpus::SplitDataset(build.users, seed);
  corpus::WriteSplit(out, split,
                     {{"positives", std::to_string(build.positives)},
                      {"controls", std::to_string(build.controls)},
                      {"leakage_matches", std::to_string(leaks)}});
  std::printf("positives=%d controls=%d leakage_matches=%d\n", build.positives, build.controls,
              leaks);
  return leaks == 0 ? 0 : 2;
}

int ExtractCmd(const Globals& g, const std::string& corpus_path, const std::string& mode,
               const std::string& out) {
  const auto toolkit = harness::Toolkit::Load(AssetsDir(g));
  const auto users = corpus::ReadCorpusUsers(corpus_path);
  const auto series = toolkit->Extract(users, g.workers);
  fs::create_directories(out);
  if (mode == "user" || mode == "both") {
    const fs::path p = fs::path(out) / "features_user.csv";
    features::WriteUserMatrixCsv(p, toolkit->registry(), series);
    features::WriteFeatureManifest(p, toolkit->registry(), "user", series.size());
  }
  if (mode == "sentence" || mode == "both") {
    const fs::path p = fs::path(out) / "features_sentence.csv";
    features::WriteSeriesCsv(p, toolkit->registry(), series);
    std::size_t rows = 0;
    for (const auto& s : series) rows += s.rows();
    features::WriteFeatureManifest(p, toolkit->registry(), "sentence", rows);
  }
  std::printf("users=%zu features=%zu\n", series.size(), toolkit->registry().size());
  return 0;
}

int ContourCmd(const Globals& g, const std::string& corpus_path, const std::string& user_id,
               const std::string& codes, const std::string& out) {
  const auto toolkit = harness::Toolkit::Load(AssetsDir(g));
  const auto users = corpus::ReadCorpusUsers(corpus_path);
  const auto it = std::find_if(users.begin(), users.end(),
                               [&](const auto& u) { return u.user_id == user_id; });
  if (it == users.end()) throw Error("user not found: " + user_id);
  const auto series =
      features::ExtractUserSeries(*it, toolkit->pipeline(), toolkit->extractor());
  std::vector<std::string> code_list;
  for (const auto& c : Split(codes, ',')) {
    if (!Trim(c).empty()) code_list.emplace_back(Trim(c));
  }
  const auto points = features::ZscoreContour(series, toolkit->registry(), code_list);
  fs::create_directories(out);
  features::WriteContourTsv(fs::path(out) / "contour.tsv", points);
  WriteFile(fs::path(out) / "contour.svg", features::RenderContourSvg(points));
  return 0;
}

int TrainCmd(const Globals& g, const std::string& corpus_dir, const std::string& model,
             const std::string& config_path, uint64_t seed, const std::string& out) {
  const auto family = ml::ParseFamily(model);
  const auto config = LoadConfig(config_path, g);
  const auto toolkit = harness::Toolkit::Load(AssetsDir(g));
  const auto split = harness::ExtractSplit(corpus::ReadSplit(corpus_dir), *toolkit, config.workers);
  const auto result = harness::RunInDomain(split, toolkit->registry(), family, config, seed);
  WriteTrainOutputs(result, out);
  std::cout << harness::FormatMetricsTable({result.test});
  return 0;
}

int EvaluateCmd(const Globals& g, const std::string& artifact_path, const std::string& corpus_path,
                const std::string& out) {
  const auto artifact = ml::ModelArtifact::Load(artifact_path);
  const auto toolkit = harness::Toolkit::Load(AssetsDir(g));
  if (artifact.registry_fingerprint != toolkit->registry().fingerprint()) {
    throw Error("model artifact was trained with a different feature registry");
  }
  const auto split = ReadEvaluationSplit(corpus_path);
  const auto test = toolkit->Extract(split.test, g.workers);
  const Vector p = artifact.PredictUsers(test);
  auto row = harness::ComputeMetrics(ml::UserLabels(test), ml::ThresholdLabels(p));
  harness::RunManifest m;
  m.kind = "evaluate";
  m.family = artifact.family;
  m.seed = artifact.seed;
  m.registry_fingerprint = artifact.registry_fingerprint;
  m.corpus_digests = {{"test", harness::UsersDigest(split.test)},
                      {"model_artifact", Sha256Hex(ReadFile(artifact_path))}};
  row.model = std::string(ml::FamilyName(artifact.family));
  row.manifest_digest = m.Digest();
  harness::EmitReport({row}, nullptr, m, out);
  std::cout << harness::FormatMetricsTable({row});
  return 0;
}

int ExplainCmd(const Globals& g, const std::string& artifact_path, const std::string& corpus_dir,
               std::size_t samples, std::size_t budget, std::size_t max_candidates,
               std::size_t top_k, bool zero_imputation, uint64_t seed, const std::string& out) {
  const auto artifact = ml::ModelArtifact::Load(artifact_path);
  const auto toolkit = harness::Toolkit::Load(AssetsDir(g));
  const auto& registry = toolkit->registry();
  const auto split = corpus::ReadSplit(corpus_dir);
  const auto train = toolkit->Extract(split.train, g.workers);
  explain::SpLimeConfig cfg;
  cfg.surrogate.samples = samples;
  cfg.budget = budget;
  cfg.max_candidates = max_candidates;
  cfg.zero_imputation = zero_imputation;
  cfg.seed = seed;
  cfg.workers = g.workers;
  const auto sp = explain::RunSpLime(artifact, registry, train, cfg);
  const auto directions =
      explain::GroupDirections(registry, ml::UserMatrix(train), ml::UserLabels(train));
  std::optional<ml::Importance> mdi;
  if (const auto* f = std::get_if<ml::ForestModel>(&artifact.model)) mdi = ml::MdiImportance(*f);
  if (const auto* b = std::get_if<ml::GbmModel>(&artifact.model)) mdi = ml::MdiImportance(*b);
  const auto report = explain::BuildReport(registry, std::string(ml::FamilyName(artifact.family)),
                                           sp.i_values, directions, mdi ? &*mdi : nullptr, top_k,
                                           sp.picked.size(), samples);
  harness::RunManifest m;
  m.kind = "explain";
  m.family = artifact.family;
  m.seed = seed;
  m.registry_fingerprint = registry.fingerprint();
  m.corpus_digests = {{"train", harness::UsersDigest(split.train)},
                      {"model_artifact", Sha256Hex(ReadFile(artifact_path))}};
  m.hyperparameters = {"explain.samples=" + std::to_string(samples),
                       "explain.budget=" + std::to_string(budget),
                       "explain.max_candidates=" + std::to_string(max_candidates),
                       std::string("explain.baseline=") + (zero_imputation ? "zero" : "mean")};
  harness::EmitReport({}, &report, m, out);
  std::cout << explain::FormatReportText(report);
  return 0;
}

int OodCmd(const Globals& g, const std::string& train_corpus, const std::string& test_corpus,
           const std::string& model, std::size_t n, const std::string& config_path,
           const std::string& indomain_dir, uint64_t seed, const std::string& out) {
  const auto family = ml::ParseFamily(model);
  const auto config = LoadConfig(config_path, g);
  const auto toolkit = harness::Toolkit::Load(AssetsDir(g));
  const auto& registry = toolkit->registry();
  harness::InDomainResult indomain;
  fs::path stored = indomain_dir.empty() ? fs::path(out) / "indomain" : fs::path(indomain_dir);
  if (!indomain_dir.empty()) {
    // change_f1 is measured against the stored in-domain run.
    indomain.artifact = ml::ModelArtifact::Load(stored / "model.vscrn");
    if (indomain.artifact.family != family) throw Error("stored run used a different model family");
    const auto rows = harness::ReadResultsJson(stored / "results.json");
    if (rows.size() != 1) throw Error("stored in-domain results must hold one row");
    indomain.test = rows.front();
    const auto mj = nlohmann::json::parse(ReadFile(stored / "manifest.json"));
    indomain.manifest.kind = "indomain";
    indomain.manifest.family = family;
    indomain.manifest.seed = mj.at("seed").get<uint64_t>();
    indomain.manifest.registry_fingerprint = mj.at("registry_fingerprint").get<std::string>();
    for (const auto& [k, v] : mj.at("hyperparameters").items()) {
      indomain.manifest.hyperparameters.push_back(k + "=" + v.get<std::string>());
    }
    for (const auto& [k, v] : mj.at("corpus_digests").items()) {
      indomain.manifest.corpus_digests.emplace_back(k, v.get<std::string>());
    }
    indomain.manifest.fit_inputs_digest = mj.at("fit_inputs_digest").get<std::string>();
  } else {
    const auto split = harness::ExtractSplit(corpus::ReadSplit(train_corpus), *toolkit,
                                             config.workers);
    indomain = harness::RunInDomain(split, registry, family, config, seed);
    WriteTrainOutputs(indomain, stored);
  }
  const auto target_users = corpus::ReadCorpusUsers(test_corpus);
  const auto target = toolkit->Extract(target_users, config.workers);
  const auto result = harness::RunOod(indomain, registry, target,
                                      harness::UsersDigest(target_users), n, seed);
  harness::EmitReport({result.row}, nullptr, result.manifest, out);
  std::cout << harness::FormatMetricsTable({result.row});
  return 0;
}

int TrainTaggerCmd(const Globals& g, const std::string& fixture, int iterations, uint64_t seed,
                   const std::string& out) {
  const fs::path assets = AssetsDir(g);
  const auto corpus = text::LoadTaggedCorpus(fixture.empty() ? assets / "tagger_fixture.tsv"
                                                             : fs::path(fixture));
  const auto closed = text::ClosedClassLexicon::Load(assets / "closed_class.tsv");
  text::TaggerModel::TrainOptions options;
  options.iterations = iterations;
  options.seed = seed;
  const auto model = text::TaggerModel::Train(corpus, closed, options);
  WriteFile(out.empty() ? assets / "tagger.vstag" : fs::path(out), model.Serialize());
  std::printf("sentences=%zu features=%zu\n", corpus.size(), model.num_features());
  return 0;
}

int SynthCmd(const Globals& g, const std::string& kind, uint64_t seed, std::size_t positives,
             std::size_t controls, const std::string& out) {
  if (kind == "planted") {
    const auto registry = features::FeatureRegistry::Load(AssetsDir(g) / "registry.tsv");
    synth::PlantedConfig cfg;
    cfg.seed = seed;
    cfg.positives = positives;
    cfg.controls = controls;
    const auto series = synth::GeneratePlantedSeries(registry, cfg);
    fs::create_directories(out);
    const fs::path p = fs::path(out) / "features_sentence.csv";
    features::WriteSeriesCsv(p, registry, series);
    std::size_t rows = 0;
    for (const auto& s : series) rows += s.rows();
    features::WriteFeatureManifest(p, registry, "sentence", rows);
    return 0;
  }
  synth::TextCorpusConfig cfg;
  if (kind == "separable") {
    cfg = synth::SeparableConfig(seed);
  } else if (kind == "shifted") {
    cfg = synth::ShiftedConfig(seed);
  } else {
    throw Error("unknown synthetic kind '" + kind + "' (separable, shifted, planted)");
  }
  cfg.positives = positives;
  cfg.controls = controls;
  const auto users = synth::GenerateTextCorpus(cfg);
  corpus::WriteSplit(out, corpus::SplitDataset(users, seed),
                     {{"generator", kind}, {"generator_seed", std::to_string(seed)}});
  std::printf("users=%zu\n", users.size());
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"vscreen: linguistic screening toolkit"};
  app.require_subcommand(1);
  Globals g;
  app.add_option("--assets", g.assets, "Asset directory (default: bundled assets)");
  app.add_option("--workers", g.workers, "Worker threads for extraction and forests")
      ->capture_default_str();
  app.add_option("--log-level", g.log_level, "trace, debug, info, warn, error")
      ->capture_default_str();

  uint64_t seed = 13;
  std::string out, corpus_dir, model, config_path;

  auto* build = app.add_subcommand("build-corpus", "Detect diagnosed users and build splits");
  std::string positives, candidates, patterns, exclusions;
  int min_sentences = 3;
  build->add_option("--positives", positives, "NDJSON dump from condition forums")->required();
  build->add_option("--candidates", candidates, "NDJSON dump of control candidates")->required();
  build->add_option("--patterns", patterns, "Diagnosis pattern file");
  build->add_option("--exclusions", exclusions, "Control exclusion file");
  build->add_option("--min-sentences", min_sentences)->capture_default_str();
  build->add_option("--seed", seed)->capture_default_str();
  build->add_option("--out", out)->required();

  auto* extract = app.add_subcommand("extract", "Extract feature matrices");
  std::string mode = "both";
  extract->add_option("--corpus", corpus_dir, "Corpus directory or users file")->required();
  extract->add_option("--mode", mode, "user, sentence or both")->capture_default_str();
  extract->add_option("--out", out)->required();

  auto* contour = app.add_subcommand("contour", "Z-scored feature contour of one user");
  std::string user_id, codes;
  contour->add_option("--corpus", corpus_dir)->required();
  contour->add_option("--user", user_id)->required();
  contour->add_option("--codes", codes, "Comma-separated feature codes")->required();
  contour->add_option("--out", out)->required();

  auto* train = app.add_subcommand("train", "Train and evaluate one model family");
  train->add_option("--corpus", corpus_dir)->required();
  train->add_option("--model", model, "lr, rf, svm, gb or bilstm")->required();
  train->add_option("--config", config_path, "key = value hyperparameter file");
  train->add_option("--seed", seed)->capture_default_str();
  train->add_option("--out", out)->required();

  auto* evaluate = app.add_subcommand("evaluate", "Evaluate a saved model");
  std::string artifact;
  evaluate->add_option("--model-artifact", artifact)->required();
  evaluate->add_option("--corpus", corpus_dir)->required();
  evaluate->add_option("--out", out)->required();

  auto* explain_cmd = app.add_subcommand("explain", "Group importance and MDI report");
  std::size_t samples = 1000, budget = 200, max_candidates = 0, top_k = 25;
  bool zero_imputation = false;
  explain_cmd->add_option("--model-artifact", artifact)->required();
  explain_cmd->add_option("--corpus", corpus_dir)->required();
  explain_cmd->add_option("--samples", samples)->capture_default_str();
  explain_cmd->add_option("--budget", budget)->capture_default_str();
  explain_cmd->add_option("--max-candidates", max_candidates, "0 explains every training user")
      ->capture_default_str();
  explain_cmd->add_option("--top-k", top_k)->capture_default_str();
  explain_cmd->add_flag("--zero-imputation", zero_imputation);
  explain_cmd->add_option("--seed", seed)->capture_default_str();
  explain_cmd->add_option("--out", out)->required();

  auto* ood = app.add_subcommand("ood", "Train on one corpus, test on another");
  std::string train_corpus, test_corpus, indomain_dir;
  std::size_t n = 1000;
  ood->add_option("--train-corpus", train_corpus)->required();
  ood->add_option("--test-corpus", test_corpus)->required();
  ood->add_option("--model", model)->required();
  ood->add_option("--n", n, "Users sampled per class")->capture_default_str();
  ood->add_option("--config", config_path);
  ood->add_option("--indomain", indomain_dir, "Stored in-domain run directory");
  ood->add_option("--seed", seed)->capture_default_str();
  ood->add_option("--out", out)->required();

  auto* tagger = app.add_subcommand("train-tagger", "Train the part-of-speech tagger");
  std::string fixture;
  int iterations = 10;
  tagger->add_option("--fixture", fixture, "Tagged corpus (default: bundled fixture)");
  tagger->add_option("--iterations", iterations)->capture_default_str();
  tagger->add_option("--seed", seed)->capture_default_str();
  tagger->add_option("--out", out, "Output model (default: assets/tagger.vstag)");

  auto* synth_cmd = app.add_subcommand("synth", "Write a synthetic fixture");
  std::string kind = "separable";
  std::size_t n_pos = 1000, n_ctl = 1000;
  synth_cmd->add_option("--kind", kind, "separable, shifted or planted")->capture_default_str();
  synth_cmd->add_option("--positives", n_pos)->capture_default_str();
  synth_cmd->add_option("--controls", n_ctl)->capture_default_str();
  synth_cmd->add_option("--seed", seed)->capture_default_str();
  synth_cmd->add_option("--out", out)->required();

  CLI11_PARSE(app, argc, argv);
  spdlog::set_level(spdlog::level::from_str(g.log_level));
  try {
    if (*build) return BuildCorpusCmd(g, positives, candidates, patterns, exclusions,
                                      min_sentences, seed, out);
    if (*extract) return ExtractCmd(g, corpus_dir, mode, out);
    if (*contour) return ContourCmd(g, corpus_dir, user_id, codes, out);
    if (*train) return TrainCmd(g, corpus_dir, model, config_path, seed, out);
    if (*evaluate) return EvaluateCmd(g, artifact, corpus_dir, out);
    if (*explain_cmd) return ExplainCmd(g, artifact, corpus_dir, samples, budget, max_candidates,
                                        top_k, zero_imputation, seed, out);
    if (*ood) return OodCmd(g, train_corpus, test_corpus, model, n, config_path, indomain_dir,
                            seed, out);
    if (*tagger) return TrainTaggerCmd(g, fixture, iterations, seed, out);
    if (*synth_cmd) return SynthCmd(g, kind, seed, n_pos, n_ctl, out);
  } catch (const std::exception& e) {
    spdlog::error("{}", e.what());
    return 1;
  }
  return 0;
}
