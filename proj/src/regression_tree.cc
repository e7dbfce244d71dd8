/*
 * Copyright 2026 The rankadapt Authors.
 *
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

#include "rankadapt/regression_tree.h"

#include <algorithm>
#include <cmath>
#include <string>
#include <utility>

#include "rankadapt/error.h"

namespace rankadapt {

FeatureMatrix FeatureMatrix::from_dataset(const Dataset& dataset) {
  FeatureMatrix m(dataset.document_count(), dataset.feature_count());
  std::size_t r = 0;
  for (const auto& q : dataset.queries()) {
    for (const auto& d : q.documents) {
      std::copy(d.features.begin(), d.features.end(), m.row(r).begin());
      ++r;
    }
  }
  return m;
}

FeatureMatrix FeatureMatrix::from_rows(
    const std::vector<std::vector<double>>& rows) {
  const std::size_t cols = rows.empty() ? 0 : rows.front().size();
  FeatureMatrix m(rows.size(), cols);
  for (std::size_t r = 0; r < rows.size(); ++r) {
    if (rows[r].size() != cols) throw InvalidInput("ragged feature rows");
    std::copy(rows[r].begin(), rows[r].end(), m.row(r).begin());
  }
  return m;
}

RegressionTree RegressionTree::single_leaf(std::size_t feature_count,
                                           double value) {
  return from_nodes(feature_count, {TreeNode{.value = value}});
}

RegressionTree RegressionTree::from_nodes(std::size_t feature_count,
                                          std::vector<TreeNode> nodes) {
  if (nodes.empty()) throw InvalidInput("tree has no nodes");
  // Every node other than the root must be referenced exactly once, by a
  // parent with a smaller index; that rules out cycles and orphans.
  std::vector<int> parents(nodes.size(), 0);
  for (std::size_t i = 0; i < nodes.size(); ++i) {
    const auto& n = nodes[i];
    if (n.is_leaf()) {
      if (!std::isfinite(n.value)) throw InvalidInput("leaf value not finite");
      continue;
    }
    if (static_cast<std::size_t>(n.feature) >= feature_count) {
      throw InvalidInput("tree split feature out of range");
    }
    if (!std::isfinite(n.threshold)) throw InvalidInput("threshold not finite");
    for (int child : {n.left, n.right}) {
      if (child <= static_cast<int>(i) ||
          child >= static_cast<int>(nodes.size())) {
        throw InvalidInput("tree child index invalid");
      }
      ++parents[child];
    }
  }
  for (std::size_t i = 1; i < nodes.size(); ++i) {
    if (parents[i] != 1) throw InvalidInput("tree node reached twice or never");
  }
  RegressionTree tree;
  tree.feature_count_ = feature_count;
  tree.nodes_ = std::move(nodes);
  return tree;
}

std::size_t RegressionTree::leaf_count() const {
  return static_cast<std::size_t>(std::count_if(
      nodes_.begin(), nodes_.end(), [](const TreeNode& n) { return n.is_leaf(); }));
}

std::size_t RegressionTree::leaf_index(std::span<const double> features) const {
  if (features.size() != feature_count_) {
    throw InvalidInput("tree: expected " + std::to_string(feature_count_) +
                       " features, got " + std::to_string(features.size()));
  }
  std::size_t at = 0;
  while (!nodes_[at].is_leaf()) {
    const auto& n = nodes_[at];
    at = static_cast<std::size_t>(features[n.feature] <= n.threshold ? n.left
                                                                     : n.right);
  }
  return at;
}

double RegressionTree::predict(std::span<const double> features) const {
  return nodes_[leaf_index(features)].value;
}

void RegressionTree::set_leaf_value(std::size_t node, double value) {
  if (node >= nodes_.size() || !nodes_[node].is_leaf()) {
    throw InvalidInput("set_leaf_value: not a leaf");
  }
  nodes_[node].value = value;
}

void TreeConfig::validate() const {
  if (max_leaves < 1) throw InvalidInput("leaves must be >= 1");
  if (min_samples_per_leaf < 1) {
    throw InvalidInput("min samples per leaf must be >= 1");
  }
  if (!(sample_rate > 0.0 && sample_rate <= 1.0)) {
    throw InvalidInput("sample rate must be in (0, 1]");
  }
}

namespace {

// Splits must remove more than this fraction of a node's squared error;
// anything smaller is rounding noise.
constexpr double kMinRelativeGain = 1e-10;

struct Split {
  bool valid = false;
  double gain = 0.0;
  int feature = -1;
  double threshold = 0.0;
};

double midpoint(double lo, double hi) {
  const double mid = lo + (hi - lo) / 2.0;
  return mid < hi ? mid : lo;
}

}  // namespace

class TreeBuilder {
 public:
  TreeBuilder(const FeatureMatrix& samples, std::span<const double> targets,
              const TreeConfig& config, Rng& rng)
      : samples_(samples), targets_(targets), config_(config), rng_(rng) {}

  RegressionTree build() {
    std::vector<std::size_t> all(samples_.rows());
    for (std::size_t i = 0; i < all.size(); ++i) all[i] = i;
    tree_.feature_count_ = samples_.cols();
    add_node(std::move(all));

    std::size_t leaves = 1;
    if (config_.max_leaves > 1) evaluate(0);
    while (leaves < static_cast<std::size_t>(config_.max_leaves)) {
      int pick = -1;
      for (std::size_t i = 0; i < pending_.size(); ++i) {
        if (!pending_[i].valid) continue;
        if (pick < 0 || pending_[i].gain > pending_[pick].gain) {
          pick = static_cast<int>(i);
        }
      }
      if (pick < 0) break;
      split(static_cast<std::size_t>(pick));
      ++leaves;
      if (leaves < static_cast<std::size_t>(config_.max_leaves)) {
        evaluate(tree_.nodes_.size() - 2);
        evaluate(tree_.nodes_.size() - 1);
      }
    }
    return std::move(tree_);
  }

 private:
  std::size_t add_node(std::vector<std::size_t> rows) {
    double sum = 0.0;
    for (auto r : rows) sum += targets_[r];
    TreeNode node;
    node.value = sum / static_cast<double>(rows.size());
    tree_.nodes_.push_back(node);
    rows_.push_back(std::move(rows));
    pending_.emplace_back();
    return tree_.nodes_.size() - 1;
  }

  void evaluate(std::size_t node) {
    const auto& rows = rows_[node];
    const auto min_leaf = static_cast<std::size_t>(config_.min_samples_per_leaf);
    if (rows.size() < 2 * min_leaf) return;

    const double mean = tree_.nodes_[node].value;
    double sse = 0.0;
    bool constant = true;
    for (auto r : rows) {
      sse += (targets_[r] - mean) * (targets_[r] - mean);
      constant = constant && targets_[r] == targets_[rows.front()];
    }
    if (constant) return;

    std::vector<std::size_t> eval_rows = rows;
    std::vector<std::size_t> features(samples_.cols());
    for (std::size_t f = 0; f < features.size(); ++f) features[f] = f;
    if (config_.randomize) {
      const auto row_pick = rng_.sample_indices(
          rows.size(), subsample_size(rows.size()));
      eval_rows.clear();
      for (auto i : row_pick) eval_rows.push_back(rows[i]);
      features = rng_.sample_indices(features.size(),
                                     subsample_size(features.size()));
    }

    Split best = best_split(eval_rows, features, min_leaf);
    if (!best.valid) return;
    if (config_.randomize) {
      // The split was chosen on a subsample; score it on the whole node.
      best.gain = full_gain(rows, best, min_leaf);
      if (best.gain < 0.0) return;
    }
    if (!(best.gain > kMinRelativeGain * sse)) return;
    pending_[node] = best;
  }

  std::size_t subsample_size(std::size_t n) const {
    const auto k = static_cast<std::size_t>(
        std::llround(config_.sample_rate * static_cast<double>(n)));
    return std::clamp<std::size_t>(k, 1, n);
  }

  Split best_split(std::span<const std::size_t> rows,
                   std::span<const std::size_t> features,
                   std::size_t min_leaf) const {
    Split best;
    const std::size_t m = rows.size();
    if (m < 2 * min_leaf) return best;
    double total = 0.0;
    for (auto r : rows) total += targets_[r];
    const double base = total * total / static_cast<double>(m);

    std::vector<std::pair<double, double>> column(m);
    for (auto f : features) {
      for (std::size_t i = 0; i < m; ++i) {
        column[i] = {samples_.at(rows[i], f), targets_[rows[i]]};
      }
      std::sort(column.begin(), column.end());
      double left_sum = 0.0;
      for (std::size_t p = 1; p < m; ++p) {
        left_sum += column[p - 1].second;
        if (column[p - 1].first == column[p].first) continue;
        if (p < min_leaf || m - p < min_leaf) continue;
        const double right_sum = total - left_sum;
        const double gain = left_sum * left_sum / static_cast<double>(p) +
                            right_sum * right_sum / static_cast<double>(m - p) -
                            base;
        if (!best.valid || gain > best.gain) {
          best = {true, gain, static_cast<int>(f),
                  midpoint(column[p - 1].first, column[p].first)};
        }
      }
    }
    return best;
  }

  // Error reduction of `split` over every row of the node; -1 when the split
  // leaves a side below min_leaf.
  double full_gain(std::span<const std::size_t> rows, const Split& split,
                   std::size_t min_leaf) const {
    double total = 0.0;
    double left_sum = 0.0;
    std::size_t left_n = 0;
    for (auto r : rows) {
      total += targets_[r];
      if (samples_.at(r, split.feature) <= split.threshold) {
        left_sum += targets_[r];
        ++left_n;
      }
    }
    const std::size_t right_n = rows.size() - left_n;
    if (left_n < min_leaf || right_n < min_leaf) return -1.0;
    const double right_sum = total - left_sum;
    return left_sum * left_sum / static_cast<double>(left_n) +
           right_sum * right_sum / static_cast<double>(right_n) -
           total * total / static_cast<double>(rows.size());
  }

  void split(std::size_t node) {
    const Split s = pending_[node];
    pending_[node] = Split{};
    std::vector<std::size_t> left;
    std::vector<std::size_t> right;
    for (auto r : rows_[node]) {
      (samples_.at(r, s.feature) <= s.threshold ? left : right).push_back(r);
    }
    rows_[node].clear();
    rows_[node].shrink_to_fit();
    const auto l = add_node(std::move(left));
    const auto rr = add_node(std::move(right));
    auto& n = tree_.nodes_[node];
    n.feature = s.feature;
    n.threshold = s.threshold;
    n.left = static_cast<int>(l);
    n.right = static_cast<int>(rr);
  }

  const FeatureMatrix& samples_;
  std::span<const double> targets_;
  const TreeConfig& config_;
  Rng& rng_;
  RegressionTree tree_;
  std::vector<std::vector<std::size_t>> rows_;
  std::vector<Split> pending_;
};

RegressionTree fit_regression_tree(const FeatureMatrix& samples,
                                   std::span<const double> targets,
                                   const TreeConfig& config, Rng& rng) {
  config.validate();
  if (samples.rows() == 0) throw InvalidInput("cannot fit a tree to no samples");
  if (targets.size() != samples.rows()) {
    throw InvalidInput("fit_regression_tree: target count mismatch");
  }
  return TreeBuilder(samples, targets, config, rng).build();
}

void set_newton_leaf_values(RegressionTree& tree, const FeatureMatrix& samples,
                            std::span<const double> residuals,
                            std::span<const double> weights) {
  if (residuals.size() != samples.rows() || weights.size() != samples.rows()) {
    throw InvalidInput("set_newton_leaf_values: length mismatch");
  }
  const std::size_t n_nodes = tree.nodes().size();
  std::vector<double> num(n_nodes, 0.0);
  std::vector<double> den(n_nodes, 0.0);
  for (std::size_t r = 0; r < samples.rows(); ++r) {
    const auto leaf = tree.leaf_index(samples.row(r));
    num[leaf] += residuals[r];
    den[leaf] += weights[r];
  }
  for (std::size_t i = 0; i < n_nodes; ++i) {
    if (!tree.nodes()[i].is_leaf()) continue;
    tree.set_leaf_value(i, den[i] == 0.0 ? 0.0 : num[i] / den[i]);
  }
}

}  // namespace rankadapt
