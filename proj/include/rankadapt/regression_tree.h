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

#ifndef RANKADAPT_REGRESSION_TREE_H_
#define RANKADAPT_REGRESSION_TREE_H_

#include <cstddef>
#include <span>
#include <vector>

#include "rankadapt/dataset.h"
#include "rankadapt/random.h"

namespace rankadapt {

// Dense row-major sample matrix.
class FeatureMatrix {
 public:
  FeatureMatrix() = default;
  FeatureMatrix(std::size_t rows, std::size_t cols)
      : rows_(rows), cols_(cols), values_(rows * cols, 0.0) {}

  // Every document of the dataset, in query order.
  static FeatureMatrix from_dataset(const Dataset& dataset);
  static FeatureMatrix from_rows(const std::vector<std::vector<double>>& rows);

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  std::span<const double> row(std::size_t r) const {
    return {values_.data() + r * cols_, cols_};
  }
  std::span<double> row(std::size_t r) {
    return {values_.data() + r * cols_, cols_};
  }
  double at(std::size_t r, std::size_t c) const {
    return values_[r * cols_ + c];
  }

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<double> values_;
};

// Internal nodes route `x[feature] <= threshold` to `left`, everything else
// to `right`. Leaves have feature == -1.
struct TreeNode {
  int feature = -1;
  double threshold = 0.0;
  int left = -1;
  int right = -1;
  double value = 0.0;

  bool is_leaf() const { return feature < 0; }
};

class RegressionTree {
 public:
  RegressionTree() = default;
  static RegressionTree single_leaf(std::size_t feature_count, double value);
  // Nodes are validated: children in range, acyclic, features in range.
  static RegressionTree from_nodes(std::size_t feature_count,
                                   std::vector<TreeNode> nodes);

  std::size_t feature_count() const { return feature_count_; }
  std::size_t leaf_count() const;
  const std::vector<TreeNode>& nodes() const { return nodes_; }

  // Index of the leaf node that `features` falls into.
  std::size_t leaf_index(std::span<const double> features) const;
  double predict(std::span<const double> features) const;

  void set_leaf_value(std::size_t node, double value);

 private:
  friend class TreeBuilder;

  std::size_t feature_count_ = 0;
  std::vector<TreeNode> nodes_;
};

struct TreeConfig {
  int max_leaves = 20;
  int min_samples_per_leaf = 1;
  bool randomize = false;
  double sample_rate = 0.7;

  void validate() const;
};

// Greedy best-first growth under squared error. Candidate thresholds are the
// midpoints between consecutive distinct feature values; the frontier node
// with the largest error reduction is split next, until max_leaves leaves or
// no split reduces the error. Leaf values are target means. With
// `randomize`, each node draws its own row and feature subsamples from `rng`
// before searching for its split.
RegressionTree fit_regression_tree(const FeatureMatrix& samples,
                                   std::span<const double> targets,
                                   const TreeConfig& config, Rng& rng);

// Replaces every leaf value by the one-step Newton estimate
// sum(residuals) / sum(weights) over the samples routed to the leaf, or 0
// when the weights sum to 0.
void set_newton_leaf_values(RegressionTree& tree, const FeatureMatrix& samples,
                            std::span<const double> residuals,
                            std::span<const double> weights);

}  // namespace rankadapt

#endif  // RANKADAPT_REGRESSION_TREE_H_
