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

#include "vscreen/model.h"

#include <charconv>
#include <cmath>
#include <cstdlib>
#include <type_traits>

#include "vscreen/common.h"

namespace vscreen::ml {
namespace {

constexpr std::string_view kMagic = "VSCRN1";

int64_t ParseIntValue(std::string_view key, std::string_view text) {
  int64_t v = 0;
  const auto t = Trim(text);
  const auto [p, ec] = std::from_chars(t.data(), t.data() + t.size(), v);
  if (ec != std::errc() || p != t.data() + t.size()) {
    throw Error("config " + std::string(key) + ": expected an integer, got '" +
                std::string(text) + "'");
  }
  return v;
}

double ParseRealValue(std::string_view key, std::string_view text) {
  const std::string t(Trim(text));
  char* end = nullptr;
  const double v = std::strtod(t.c_str(), &end);
  if (t.empty() || end != t.c_str() + t.size() || !std::isfinite(v)) {
    throw Error("config " + std::string(key) + ": expected a number, got '" +
                std::string(text) + "'");
  }
  return v;
}

// Calls fn(family, key, field) for every tunable field.
template <typename Fn>
void VisitParams(ModelConfig& c, Fn&& fn) {
  using F = ModelFamily;
  fn(F::kLogistic, "lr.C", c.logistic.C);
  fn(F::kLogistic, "lr.l1_ratio", c.logistic.l1_ratio);
  fn(F::kLogistic, "lr.max_epochs", c.logistic.max_epochs);
  fn(F::kLogistic, "lr.tol", c.logistic.tol);
  fn(F::kForest, "rf.n_trees", c.forest.n_trees);
  fn(F::kForest, "rf.max_depth", c.forest.max_depth);
  fn(F::kForest, "rf.min_samples_split", c.forest.min_samples_split);
  fn(F::kForest, "rf.min_samples_leaf", c.forest.min_samples_leaf);
  fn(F::kSvm, "svm.C", c.svm.C);
  fn(F::kSvm, "svm.tol", c.svm.tol);
  fn(F::kBoosting, "gb.n_estimators", c.boosting.n_estimators);
  fn(F::kBoosting, "gb.learning_rate", c.boosting.learning_rate);
  fn(F::kBoosting, "gb.max_depth", c.boosting.max_depth);
  fn(F::kBoosting, "gb.min_samples_split", c.boosting.min_samples_split);
  fn(F::kBiLstm, "bilstm.hidden", c.bilstm.hidden);
  fn(F::kBiLstm, "bilstm.layers", c.bilstm.layers);
  fn(F::kBiLstm, "bilstm.head_width", c.bilstm.head_width);
  fn(F::kBiLstm, "bilstm.head_layers", c.bilstm.head_layers);
  fn(F::kBiLstm, "bilstm.dropout", c.bilstm.dropout);
  fn(F::kBiLstm, "bilstm.max_sentences", c.bilstm.max_sentences);
  fn(F::kBiLstm, "bilstm.epochs", c.bilstm_train.epochs);
  fn(F::kBiLstm, "bilstm.batch_size", c.bilstm_train.batch_size);
  fn(F::kBiLstm, "bilstm.patience", c.bilstm_train.patience);
  fn(F::kBiLstm, "bilstm.max_lr", c.bilstm_train.schedule.max_lr);
  fn(F::kBiLstm, "bilstm.warmup_fraction", c.bilstm_train.schedule.warmup_fraction);
  fn(F::kBiLstm, "bilstm.initial_div", c.bilstm_train.schedule.initial_div);
  fn(F::kBiLstm, "bilstm.final_div", c.bilstm_train.schedule.final_div);
  fn(F::kBiLstm, "bilstm.weight_decay", c.bilstm_train.weight_decay);
  fn(F::kBiLstm, "bilstm.beta1", c.bilstm_train.beta1);
  fn(F::kBiLstm, "bilstm.beta2", c.bilstm_train.beta2);
  fn(F::kBiLstm, "bilstm.eps", c.bilstm_train.eps);
}

std::string JoinCodes(const std::vector<std::string>& codes) {
  std::string out;
  for (const auto& c : codes) {
    if (!out.empty()) out.push_back(' ');
    out += c;
  }
  return out;
}

void CheckFeatureCount(const ModelArtifact& a, std::size_t got) {
  if (got != a.feature_codes.size()) {
    throw Error("model expects " + std::to_string(a.feature_codes.size()) +
                " features, got " + std::to_string(got));
  }
}

}  // namespace

std::string_view FamilyTag(ModelFamily family) {
  switch (family) {
    case ModelFamily::kLogistic: return "lr";
    case ModelFamily::kForest: return "rf";
    case ModelFamily::kSvm: return "svm";
    case ModelFamily::kBoosting: return "gb";
    case ModelFamily::kBiLstm: return "bilstm";
  }
  return "?";
}

ModelFamily ParseFamily(std::string_view tag) {
  for (ModelFamily f : kAllFamilies) {
    if (FamilyTag(f) == tag) return f;
  }
  throw Error("unknown model family '" + std::string(tag) +
              "' (expected lr, rf, svm, gb or bilstm)");
}

std::string_view FamilyName(ModelFamily family) {
  switch (family) {
    case ModelFamily::kLogistic: return "Logistic Regression";
    case ModelFamily::kForest: return "Random Forest";
    case ModelFamily::kSvm: return "SVM";
    case ModelFamily::kBoosting: return "Gradient Boosting";
    case ModelFamily::kBiLstm: return "BiLSTM";
  }
  return "?";
}

bool ModelConfig::Set(std::string_view key, std::string_view value) {
  bool found = false;
  VisitParams(*this, [&](ModelFamily, std::string_view k, auto& field) {
    if (k != key) return;
    found = true;
    using T = std::decay_t<decltype(field)>;
    if constexpr (std::is_same_v<T, double>) {
      field = ParseRealValue(key, value);
    } else {
      field = static_cast<T>(ParseIntValue(key, value));
    }
  });
  return found;
}

std::vector<std::string> ModelConfig::Describe(ModelFamily family) const {
  ModelConfig copy = *this;
  std::vector<std::string> out;
  VisitParams(copy, [&](ModelFamily f, std::string_view k, auto& field) {
    if (f != family) return;
    using T = std::decay_t<decltype(field)>;
    if constexpr (std::is_same_v<T, double>) {
      out.push_back(std::string(k) + "=" + FormatShort(field));
    } else {
      out.push_back(std::string(k) + "=" + std::to_string(field));
    }
  });
  return out;
}

std::vector<int> ThresholdLabels(const Vector& probabilities, double threshold) {
  std::vector<int> out(static_cast<std::size_t>(probabilities.size()));
  for (Eigen::Index i = 0; i < probabilities.size(); ++i) {
    out[static_cast<std::size_t>(i)] = probabilities(i) >= threshold ? 1 : 0;
  }
  return out;
}

Matrix UserMatrix(const std::vector<features::UserFeatureSeries>& users) {
  if (users.empty()) return Matrix();
  const auto cols = static_cast<Eigen::Index>(users.front().cols);
  Matrix m(static_cast<Eigen::Index>(users.size()), cols);
  for (std::size_t i = 0; i < users.size(); ++i) {
    if (static_cast<Eigen::Index>(users[i].cols) != cols) {
      throw Error("users have different feature counts");
    }
    const auto row = features::AggregateUser(users[i]);
    m.row(static_cast<Eigen::Index>(i)) =
        Eigen::Map<const Eigen::RowVectorXd>(row.data(), cols);
  }
  return m;
}

std::vector<int> UserLabels(const std::vector<features::UserFeatureSeries>& users) {
  std::vector<int> y;
  y.reserve(users.size());
  for (const auto& u : users) y.push_back(u.label);
  return y;
}

Standardizer FitSentenceStandardizer(
    const std::vector<features::UserFeatureSeries>& users) {
  if (users.empty()) throw Error("no users to fit the sentence standardizer");
  const std::size_t cols = users.front().cols;
  std::size_t rows = 0;
  for (const auto& u : users) {
    if (u.cols != cols) throw Error("users have different feature counts");
    rows += u.rows();
  }
  Matrix x(static_cast<Eigen::Index>(rows), static_cast<Eigen::Index>(cols));
  std::vector<uint8_t> missing;
  missing.reserve(rows * cols);
  Eigen::Index r = 0;
  for (const auto& u : users) {
    for (std::size_t i = 0; i < u.rows(); ++i, ++r) {
      for (std::size_t c = 0; c < cols; ++c) {
        x(r, static_cast<Eigen::Index>(c)) = u.at(i, c);
      }
    }
    missing.insert(missing.end(), u.missing.begin(), u.missing.end());
  }
  return Standardizer::FitMasked(x, missing);
}

Matrix SeriesToSequence(const features::UserFeatureSeries& series,
                        const Standardizer& standardizer, int max_rows) {
  if (series.cols != standardizer.size()) {
    throw Error("series has " + std::to_string(series.cols) +
                " features, standardizer expects " +
                std::to_string(standardizer.size()));
  }
  const std::size_t t = std::min(series.rows(), static_cast<std::size_t>(max_rows));
  Matrix seq(static_cast<Eigen::Index>(series.cols), static_cast<Eigen::Index>(t));
  const Vector& means = standardizer.means();
  const Vector& scales = standardizer.scales();
  for (std::size_t i = 0; i < t; ++i) {
    for (std::size_t c = 0; c < series.cols; ++c) {
      const auto ci = static_cast<Eigen::Index>(c);
      seq(ci, static_cast<Eigen::Index>(i)) =
          series.is_missing(i, c) ? 0.0 : (series.at(i, c) - means(ci)) / scales(ci);
    }
  }
  return seq;
}

Vector ModelArtifact::PredictUserMatrix(const Matrix& raw) const {
  if (is_sequence()) throw Error("the sequence model needs per-sentence input");
  CheckFeatureCount(*this, static_cast<std::size_t>(raw.cols()));
  const Matrix x = standardizer.Transform(raw);
  return std::visit(
      [&](const auto& m) -> Vector {
        using T = std::decay_t<decltype(m)>;
        if constexpr (std::is_same_v<T, seq::BiLstmNet>) {
          throw Error("unreachable");
        } else {
          return m.PredictProba(x);
        }
      },
      model);
}

Vector ModelArtifact::PredictSeries(
    const std::vector<const features::UserFeatureSeries*>& users) const {
  if (!is_sequence()) throw Error("per-sentence input needs the sequence model");
  const auto& net = std::get<seq::BiLstmNet>(model);
  std::vector<Matrix> seqs;
  seqs.reserve(users.size());
  for (const auto* u : users) {
    CheckFeatureCount(*this, u->cols);
    if (u->rows() == 0) throw Error("user " + u->user_id + " has no sentences");
    seqs.push_back(SeriesToSequence(*u, standardizer, net.config().max_sentences));
  }
  return seq::PredictSequences(net, seqs);
}

Vector ModelArtifact::PredictUsers(
    const std::vector<features::UserFeatureSeries>& users) const {
  if (is_sequence()) {
    std::vector<const features::UserFeatureSeries*> ptrs;
    for (const auto& u : users) ptrs.push_back(&u);
    return PredictSeries(ptrs);
  }
  if (users.empty()) return Vector();
  return PredictUserMatrix(UserMatrix(users));
}

std::string ModelArtifact::Serialize() const {
  ArtifactWriter w;
  w.Text("format", kMagic);
  w.Text("family", FamilyTag(family));
  w.Text("registry_fingerprint", registry_fingerprint);
  w.Int("feature_count", static_cast<int64_t>(feature_codes.size()));
  w.Text("feature_codes", JoinCodes(feature_codes));
  w.Text("seed", std::to_string(seed));
  standardizer.Serialize(w);
  std::visit([&](const auto& m) { m.Serialize(w); }, model);
  w.Text("end", kMagic);
  return w.str();
}

ModelArtifact ModelArtifact::Parse(std::string_view contents) {
  ArtifactReader r(contents);
  if (r.Text("format") != kMagic) throw Error("not a VSCRN1 model artifact");
  ModelArtifact a;
  a.family = ParseFamily(r.Text("family"));
  a.registry_fingerprint = r.Text("registry_fingerprint");
  const auto count = r.Int("feature_count");
  const std::string codes = r.Text("feature_codes");
  for (const auto& c : Split(codes, ' ')) {
    if (!c.empty()) a.feature_codes.push_back(c);
  }
  if (static_cast<int64_t>(a.feature_codes.size()) != count) {
    throw Error("artifact feature code count mismatch");
  }
  try {
    a.seed = std::stoull(r.Text("seed"));
  } catch (const std::logic_error&) {
    throw Error("malformed seed in model artifact");
  }
  a.standardizer = Standardizer::Deserialize(r);
  if (a.standardizer.size() != a.feature_codes.size()) {
    throw Error("artifact standardizer width does not match the feature codes");
  }
  switch (a.family) {
    case ModelFamily::kLogistic: a.model = LinearModel::Deserialize(r); break;
    case ModelFamily::kForest: a.model = ForestModel::Deserialize(r); break;
    case ModelFamily::kSvm: a.model = SvmModel::Deserialize(r); break;
    case ModelFamily::kBoosting: a.model = GbmModel::Deserialize(r); break;
    case ModelFamily::kBiLstm: a.model = seq::BiLstmNet::Deserialize(r); break;
  }
  if (r.Text("end") != kMagic || !r.AtEnd()) {
    throw Error("trailing or truncated data in model artifact");
  }
  return a;
}

void ModelArtifact::Save(const std::filesystem::path& path) const {
  WriteFile(path, Serialize());
}

ModelArtifact ModelArtifact::Load(const std::filesystem::path& path) {
  return Parse(ReadFile(path));
}

TrainOutput TrainModel(ModelFamily family, const ModelConfig& config,
                       const features::FeatureRegistry& registry,
                       const std::vector<features::UserFeatureSeries>& train,
                       const std::vector<features::UserFeatureSeries>& validation,
                       uint64_t seed, std::size_t workers) {
  if (train.empty()) throw Error("no training users");
  for (const auto& u : train) {
    if (u.cols != registry.size()) {
      throw Error("training features do not match the registry width");
    }
  }
  TrainOutput out;
  ModelArtifact& a = out.artifact;
  a.family = family;
  a.registry_fingerprint = registry.fingerprint();
  a.feature_codes = registry.codes();
  a.seed = seed;
  const std::vector<int> y = UserLabels(train);
  if (family == ModelFamily::kBiLstm) {
    if (validation.empty()) throw Error("the sequence model needs validation users");
    a.standardizer = FitSentenceStandardizer(train);
    seq::BiLstmConfig mc = config.bilstm;
    mc.input_dim = static_cast<int>(registry.size());
    seq::BiLstmTrainConfig tc = config.bilstm_train;
    tc.seed = seed;
    std::vector<Matrix> tr, va;
    for (const auto& u : train) tr.push_back(SeriesToSequence(u, a.standardizer, mc.max_sentences));
    for (const auto& u : validation) {
      va.push_back(SeriesToSequence(u, a.standardizer, mc.max_sentences));
    }
    auto result = seq::TrainBiLstm(tr, y, va, UserLabels(validation), mc, tc);
    a.model = std::move(result.net);
    out.training_log = std::move(result.log);
    return out;
  }
  const Matrix raw = UserMatrix(train);
  a.standardizer = Standardizer::Fit(raw);
  const Matrix x = a.standardizer.Transform(raw);
  switch (family) {
    case ModelFamily::kLogistic:
      a.model = TrainLogisticElastic(x, y, config.logistic, seed);
      break;
    case ModelFamily::kForest:
      a.model = TrainRandomForest(x, y, config.forest, seed, workers);
      break;
    case ModelFamily::kSvm:
      a.model = TrainSvmRbf(x, y, config.svm, seed);
      break;
    case ModelFamily::kBoosting:
      a.model = TrainGradientBoosting(x, y, config.boosting, seed);
      break;
    case ModelFamily::kBiLstm:
      break;
  }
  return out;
}

}  // namespace vscreen::ml
