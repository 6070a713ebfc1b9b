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

#include "vscreen/tree.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include <spdlog/spdlog.h>

#include "vscreen/common.h"
#include "vscreen/linear.h"

namespace vscreen::ml {
namespace {

struct NodeStats {
  double n = 0;
  double sum = 0;
  double sum_sq = 0;
};

// Impurity of a node: Gini for 0/1 targets, variance otherwise.
double Impurity(SplitCriterion c, const NodeStats& s) {
  if (s.n <= 0) return 0;
  const double mean = s.sum / s.n;
  if (c == SplitCriterion::kGini) return 2.0 * mean * (1.0 - mean);
  return std::max(0.0, s.sum_sq / s.n - mean * mean);
}

class TreeBuilder {
 public:
  TreeBuilder(const Matrix& x, const std::vector<double>& target,
              const TreeGrowParams& params, uint64_t seed)
      : x_(x), target_(target), params_(params), rng_(seed) {
    pool_.resize(static_cast<std::size_t>(x.cols()));
    std::iota(pool_.begin(), pool_.end(), 0);
    const int f = static_cast<int>(x.cols());
    n_candidates_ = params.max_features <= 0 ? f : std::min(params.max_features, f);
  }

  DecisionTree Build(std::vector<int> rows) {
    rows_ = std::move(rows);
    Grow(0, rows_.size(), 0);
    return std::move(tree_);
  }

 private:
  NodeStats Stats(std::size_t begin, std::size_t end) const {
    NodeStats s;
    for (std::size_t i = begin; i < end; ++i) {
      const double t = target_[static_cast<std::size_t>(rows_[i])];
      s.n += 1;
      s.sum += t;
      s.sum_sq += t * t;
    }
    return s;
  }

  // Weighted child impurity (lower is better).
  double ChildCost(const NodeStats& l, const NodeStats& r) const {
    return l.n * Impurity(params_.criterion, l) +
           r.n * Impurity(params_.criterion, r);
  }

  int Grow(std::size_t begin, std::size_t end, int depth) {
    const NodeStats stats = Stats(begin, end);
    const int id = static_cast<int>(tree_.nodes().size());
    TreeNode node;
    node.samples = stats.n;
    node.impurity = Impurity(params_.criterion, stats);
    node.value = stats.n > 0 ? stats.sum / stats.n : 0.0;
    tree_.nodes().push_back(node);

    const std::size_t n = end - begin;
    if (depth >= params_.max_depth ||
        n < static_cast<std::size_t>(params_.min_samples_split) ||
        n < 2 * static_cast<std::size_t>(params_.min_samples_leaf) ||
        node.impurity <= 0.0) {
      return id;
    }

    // Candidate features: a fresh partial shuffle of the pool.
    const std::size_t f_total = pool_.size();
    for (int k = 0; k < n_candidates_; ++k) {
      if (n_candidates_ < static_cast<int>(f_total)) {
        const auto j = static_cast<std::size_t>(k) +
                       UniformIndex(rng_, f_total - static_cast<std::size_t>(k));
        std::swap(pool_[static_cast<std::size_t>(k)], pool_[j]);
      }
    }

    int best_feature = -1;
    double best_threshold = 0;
    double best_cost = std::numeric_limits<double>::infinity();
    const auto min_leaf = static_cast<std::size_t>(params_.min_samples_leaf);
    std::vector<std::size_t> order(n);
    for (int k = 0; k < n_candidates_; ++k) {
      const int f = pool_[static_cast<std::size_t>(k)];
      const auto value = [&](std::size_t i) { return x_(rows_[begin + i], f); };
      std::iota(order.begin(), order.end(), std::size_t{0});
      std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        return value(a) < value(b);
      });
      NodeStats left;
      NodeStats right = stats;
      for (std::size_t i = 0; i + 1 < n; ++i) {
        const double t = target_[static_cast<std::size_t>(rows_[begin + order[i]])];
        left.n += 1;
        left.sum += t;
        left.sum_sq += t * t;
        right.n -= 1;
        right.sum -= t;
        right.sum_sq -= t * t;
        const double lo = value(order[i]);
        const double hi = value(order[i + 1]);
        if (!(lo < hi)) continue;
        if (i + 1 < min_leaf || n - i - 1 < min_leaf) continue;
        const double cost = ChildCost(left, right);
        if (cost < best_cost) {
          best_cost = cost;
          best_feature = f;
          best_threshold = lo + (hi - lo) / 2.0;
          if (!(best_threshold < hi)) best_threshold = lo;
        }
      }
    }
    if (best_feature < 0) return id;

    const auto mid_it = std::stable_partition(
        rows_.begin() + static_cast<std::ptrdiff_t>(begin),
        rows_.begin() + static_cast<std::ptrdiff_t>(end),
        [&](int r) { return x_(r, best_feature) <= best_threshold; });
    const auto mid = static_cast<std::size_t>(mid_it - rows_.begin());
    const int left_id = Grow(begin, mid, depth + 1);
    const int right_id = Grow(mid, end, depth + 1);
    TreeNode& self = tree_.nodes()[static_cast<std::size_t>(id)];
    self.feature = best_feature;
    self.threshold = best_threshold;
    self.left = left_id;
    self.right = right_id;
    return id;
  }

  const Matrix& x_;
  const std::vector<double>& target_;
  TreeGrowParams params_;
  Rng rng_;
  std::vector<int> pool_;
  int n_candidates_ = 0;
  std::vector<int> rows_;
  DecisionTree tree_;
};

void CheckFeatureCount(const Matrix& x, std::size_t expected) {
  if (static_cast<std::size_t>(x.cols()) != expected) {
    throw Error("model expects " + std::to_string(expected) +
                " features, got " + std::to_string(x.cols()));
  }
}

int LeafIndex(const DecisionTree& tree, const double* row) {
  const auto& nodes = tree.nodes();
  int i = 0;
  while (nodes[static_cast<std::size_t>(i)].feature >= 0) {
    const TreeNode& n = nodes[static_cast<std::size_t>(i)];
    i = row[n.feature] <= n.threshold ? n.left : n.right;
  }
  return i;
}

double MeanLogLoss(const std::vector<double>& logits, const std::vector<int>& y) {
  double total = 0;
  for (std::size_t i = 0; i < y.size(); ++i) {
    const double z = logits[i];
    const double softplus =
        z > 0 ? z + std::log1p(std::exp(-z)) : std::log1p(std::exp(z));
    total += softplus - y[i] * z;
  }
  return total / static_cast<double>(y.size());
}

// Row-major copy so tree traversal reads contiguous memory.
using RowMatrix = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

std::string SeedText(uint64_t seed) { return std::to_string(seed); }

uint64_t ParseSeed(const std::string& text) {
  try {
    return std::stoull(text);
  } catch (const std::exception&) {
    throw Error("malformed seed in artifact: '" + text + "'");
  }
}

}  // namespace

double DecisionTree::Predict(const double* row) const {
  return nodes_[static_cast<std::size_t>(LeafIndex(*this, row))].value;
}

int DecisionTree::depth() const {
  if (nodes_.empty()) return 0;
  std::vector<int> depth(nodes_.size(), 0);
  int best = 0;
  // Children always have larger indices than their parent.
  for (std::size_t i = 0; i < nodes_.size(); ++i) {
    const TreeNode& n = nodes_[i];
    best = std::max(best, depth[i]);
    if (n.feature >= 0) {
      depth[static_cast<std::size_t>(n.left)] = depth[i] + 1;
      depth[static_cast<std::size_t>(n.right)] = depth[i] + 1;
    }
  }
  return best;
}

std::size_t DecisionTree::leaf_count() const {
  return static_cast<std::size_t>(std::count_if(
      nodes_.begin(), nodes_.end(), [](const TreeNode& n) { return n.feature < 0; }));
}

void DecisionTree::AccumulateImpurityDecrease(std::vector<double>& importance) const {
  if (nodes_.empty() || nodes_[0].samples <= 0) return;
  const double root = nodes_[0].samples;
  for (const TreeNode& n : nodes_) {
    if (n.feature < 0) continue;
    const TreeNode& l = nodes_[static_cast<std::size_t>(n.left)];
    const TreeNode& r = nodes_[static_cast<std::size_t>(n.right)];
    const double decrease = n.samples * n.impurity - l.samples * l.impurity -
                            r.samples * r.impurity;
    importance[static_cast<std::size_t>(n.feature)] += decrease / root;
  }
}

void DecisionTree::Serialize(ArtifactWriter& w) const {
  Matrix m(static_cast<Eigen::Index>(nodes_.size()), 7);
  for (std::size_t i = 0; i < nodes_.size(); ++i) {
    const TreeNode& n = nodes_[i];
    const auto r = static_cast<Eigen::Index>(i);
    m(r, 0) = n.feature;
    m(r, 1) = n.threshold;
    m(r, 2) = n.left;
    m(r, 3) = n.right;
    m(r, 4) = n.value;
    m(r, 5) = n.impurity;
    m(r, 6) = n.samples;
  }
  w.Mat("tree.nodes", m);
}

DecisionTree DecisionTree::Deserialize(ArtifactReader& r) {
  const Matrix m = r.Mat("tree.nodes");
  if (m.cols() != 7 || m.rows() == 0) throw Error("malformed tree in artifact");
  DecisionTree tree;
  const int count = static_cast<int>(m.rows());
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    TreeNode n;
    n.feature = static_cast<int>(m(i, 0));
    n.threshold = m(i, 1);
    n.left = static_cast<int>(m(i, 2));
    n.right = static_cast<int>(m(i, 3));
    n.value = m(i, 4);
    n.impurity = m(i, 5);
    n.samples = m(i, 6);
    if (n.feature >= 0 && (n.left <= i || n.right <= i || n.left >= count ||
                           n.right >= count)) {
      throw Error("tree node has invalid children in artifact");
    }
    tree.nodes_.push_back(n);
  }
  return tree;
}

DecisionTree GrowTree(const Matrix& x, const std::vector<double>& target,
                      std::vector<int> rows, const TreeGrowParams& params,
                      uint64_t seed) {
  if (rows.empty()) throw Error("cannot grow a tree on zero rows");
  TreeBuilder builder(x, target, params, seed);
  return builder.Build(std::move(rows));
}

// ---- Forest -----------------------------------------------------------------

ForestModel TrainRandomForest(const Matrix& x, const std::vector<int>& y,
                              const ForestParams& params, uint64_t seed,
                              std::size_t workers) {
  CheckBinaryLabels(x, y);
  if (params.n_trees <= 0 || params.max_depth < 0 || params.min_samples_split < 2 ||
      params.min_samples_leaf < 1) {
    throw Error("invalid random forest parameters");
  }
  const std::vector<double> target(y.begin(), y.end());
  TreeGrowParams grow;
  grow.criterion = SplitCriterion::kGini;
  grow.max_depth = params.max_depth;
  grow.min_samples_split = params.min_samples_split;
  grow.min_samples_leaf = params.min_samples_leaf;
  grow.max_features =
      static_cast<int>(std::ceil(std::sqrt(static_cast<double>(x.cols()))));

  ForestModel model;
  model.params_ = params;
  model.seed_ = seed;
  model.n_features_ = static_cast<std::size_t>(x.cols());
  model.trees_.resize(static_cast<std::size_t>(params.n_trees));
  const auto n = static_cast<uint64_t>(x.rows());
  ParallelFor(model.trees_.size(), workers, [&](std::size_t t) {
    Rng rng(MixSeed(seed, t));
    std::vector<int> rows(static_cast<std::size_t>(n));
    for (auto& r : rows) r = static_cast<int>(UniformIndex(rng, n));
    model.trees_[t] = GrowTree(x, target, std::move(rows), grow, rng());
  });
  return model;
}

Vector ForestModel::PredictProba(const Matrix& x) const {
  CheckFeatureCount(x, n_features_);
  const RowMatrix rows = x;
  Vector out = Vector::Zero(x.rows());
  for (Eigen::Index i = 0; i < x.rows(); ++i) {
    double sum = 0;
    for (const auto& tree : trees_) sum += tree.Predict(rows.row(i).data());
    out(i) = sum / static_cast<double>(trees_.size());
  }
  return out;
}

void ForestModel::Serialize(ArtifactWriter& w) const {
  w.Int("forest.n_trees", params_.n_trees);
  w.Int("forest.max_depth", params_.max_depth);
  w.Int("forest.min_samples_split", params_.min_samples_split);
  w.Int("forest.min_samples_leaf", params_.min_samples_leaf);
  w.Text("forest.max_features", "sqrt");
  w.Text("forest.seed", SeedText(seed_));
  w.Int("forest.n_features", static_cast<int64_t>(n_features_));
  for (const auto& tree : trees_) tree.Serialize(w);
}

ForestModel ForestModel::Deserialize(ArtifactReader& r) {
  ForestModel m;
  m.params_.n_trees = static_cast<int>(r.Int("forest.n_trees"));
  m.params_.max_depth = static_cast<int>(r.Int("forest.max_depth"));
  m.params_.min_samples_split = static_cast<int>(r.Int("forest.min_samples_split"));
  m.params_.min_samples_leaf = static_cast<int>(r.Int("forest.min_samples_leaf"));
  if (r.Text("forest.max_features") != "sqrt") {
    throw Error("unsupported forest max_features in artifact");
  }
  m.seed_ = ParseSeed(r.Text("forest.seed"));
  m.n_features_ = static_cast<std::size_t>(r.Int("forest.n_features"));
  if (m.params_.n_trees <= 0) throw Error("forest artifact has no trees");
  for (int t = 0; t < m.params_.n_trees; ++t) {
    m.trees_.push_back(DecisionTree::Deserialize(r));
  }
  return m;
}

// ---- Boosting ---------------------------------------------------------------

GbmModel TrainGradientBoosting(const Matrix& x, const std::vector<int>& y,
                               const BoostingParams& params, uint64_t seed) {
  CheckBinaryLabels(x, y);
  if (params.n_estimators < 0 || params.learning_rate <= 0 || params.max_depth < 0 ||
      params.min_samples_split < 2) {
    throw Error("invalid gradient boosting parameters");
  }
  const std::size_t n = y.size();
  const double base = static_cast<double>(std::accumulate(y.begin(), y.end(), 0)) /
                      static_cast<double>(n);
  constexpr double kClamp = 10.0;
  double logit;
  if (base <= 0.0 || base >= 1.0) {
    spdlog::warn("boosting base rate is {}; clamping the initial log-odds", base);
    logit = base <= 0.0 ? -kClamp : kClamp;
  } else {
    logit = std::clamp(std::log(base / (1.0 - base)), -kClamp, kClamp);
  }

  GbmModel model;
  model.params_ = params;
  model.initial_logit_ = logit;
  model.n_features_ = static_cast<std::size_t>(x.cols());
  const RowMatrix rows_major = x;

  TreeGrowParams grow;
  grow.criterion = SplitCriterion::kSquaredError;
  grow.max_depth = params.max_depth;
  grow.min_samples_split = params.min_samples_split;
  grow.min_samples_leaf = 1;
  grow.max_features = 0;

  std::vector<double> f(n, logit);
  std::vector<double> residual(n);
  std::vector<double> hessian(n);
  std::vector<int> all_rows(n);
  std::iota(all_rows.begin(), all_rows.end(), 0);
  model.loss_trace_.push_back(MeanLogLoss(f, y));
  for (int m = 0; m < params.n_estimators; ++m) {
    for (std::size_t i = 0; i < n; ++i) {
      const double p = Sigmoid(f[i]);
      residual[i] = y[i] - p;
      hessian[i] = p * (1.0 - p);
    }
    DecisionTree tree = GrowTree(x, residual, all_rows, grow,
                                 MixSeed(seed, static_cast<uint64_t>(m)));
    // One Newton step per leaf.
    std::vector<double> num(tree.nodes().size(), 0.0);
    std::vector<double> den(tree.nodes().size(), 0.0);
    std::vector<int> leaf_of(n);
    for (std::size_t i = 0; i < n; ++i) {
      const int leaf = LeafIndex(tree, rows_major.row(static_cast<Eigen::Index>(i)).data());
      leaf_of[i] = leaf;
      num[static_cast<std::size_t>(leaf)] += residual[i];
      den[static_cast<std::size_t>(leaf)] += hessian[i];
    }
    for (std::size_t k = 0; k < tree.nodes().size(); ++k) {
      TreeNode& node = tree.nodes()[k];
      if (node.feature >= 0) continue;
      node.value = std::abs(den[k]) < 1e-150 ? 0.0 : num[k] / den[k];
    }
    for (std::size_t i = 0; i < n; ++i) {
      f[i] += params.learning_rate *
              tree.nodes()[static_cast<std::size_t>(leaf_of[i])].value;
    }
    model.trees_.push_back(std::move(tree));
    model.loss_trace_.push_back(MeanLogLoss(f, y));
  }
  return model;
}

Vector GbmModel::DecisionFunction(const Matrix& x) const {
  CheckFeatureCount(x, n_features_);
  const RowMatrix rows = x;
  Vector out = Vector::Constant(x.rows(), initial_logit_);
  for (Eigen::Index i = 0; i < x.rows(); ++i) {
    for (const auto& tree : trees_) {
      out(i) += params_.learning_rate * tree.Predict(rows.row(i).data());
    }
  }
  return out;
}

Vector GbmModel::PredictProba(const Matrix& x) const {
  Vector z = DecisionFunction(x);
  for (Eigen::Index i = 0; i < z.size(); ++i) z(i) = Sigmoid(z(i));
  return z;
}

void GbmModel::Serialize(ArtifactWriter& w) const {
  w.Int("gbm.n_estimators", params_.n_estimators);
  w.Real("gbm.learning_rate", params_.learning_rate);
  w.Int("gbm.max_depth", params_.max_depth);
  w.Int("gbm.min_samples_split", params_.min_samples_split);
  w.Int("gbm.n_features", static_cast<int64_t>(n_features_));
  w.Real("gbm.initial_logit", initial_logit_);
  w.Reals("gbm.loss_trace", loss_trace_);
  w.Int("gbm.trees", static_cast<int64_t>(trees_.size()));
  for (const auto& tree : trees_) tree.Serialize(w);
}

GbmModel GbmModel::Deserialize(ArtifactReader& r) {
  GbmModel m;
  m.params_.n_estimators = static_cast<int>(r.Int("gbm.n_estimators"));
  m.params_.learning_rate = r.Real("gbm.learning_rate");
  m.params_.max_depth = static_cast<int>(r.Int("gbm.max_depth"));
  m.params_.min_samples_split = static_cast<int>(r.Int("gbm.min_samples_split"));
  m.n_features_ = static_cast<std::size_t>(r.Int("gbm.n_features"));
  m.initial_logit_ = r.Real("gbm.initial_logit");
  m.loss_trace_ = r.Reals("gbm.loss_trace");
  const auto count = r.Int("gbm.trees");
  if (count < 0 || count > m.params_.n_estimators) {
    throw Error("gbm artifact tree count out of range");
  }
  for (int64_t t = 0; t < count; ++t) m.trees_.push_back(DecisionTree::Deserialize(r));
  return m;
}

// ---- Importance -------------------------------------------------------------

Importance MdiImportance(const std::vector<DecisionTree>& trees,
                         std::size_t n_features) {
  Importance out;
  out.raw.assign(n_features, 0.0);
  for (const auto& tree : trees) tree.AccumulateImpurityDecrease(out.raw);
  if (!trees.empty()) {
    for (double& v : out.raw) v /= static_cast<double>(trees.size());
  }
  const double total = std::accumulate(out.raw.begin(), out.raw.end(), 0.0);
  out.normalized.assign(n_features, 0.0);
  if (total > 0) {
    for (std::size_t j = 0; j < n_features; ++j) out.normalized[j] = out.raw[j] / total;
  }
  return out;
}

Importance MdiImportance(const ForestModel& model) {
  return MdiImportance(model.trees(), model.n_features());
}

Importance MdiImportance(const GbmModel& model) {
  return MdiImportance(model.trees(), model.n_features());
}

}  // namespace vscreen::ml
