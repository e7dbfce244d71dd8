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

#ifndef RANKADAPT_BOOSTING_H_
#define RANKADAPT_BOOSTING_H_

#include <cstdint>
#include <functional>
#include <span>
#include <variant>
#include <vector>

#include "rankadapt/dataset.h"
#include "rankadapt/metrics.h"
#include "rankadapt/regression_tree.h"
#include "rankadapt/scorer.h"

namespace rankadapt {

struct SingleFeatureBasis {
  std::size_t feature_index = 0;
};

using BasisFunction = std::variant<SingleFeatureBasis, RegressionTree>;

// One term of the additive expansion. `coefficient` is the fitted beta of a
// single-feature basis; tree leaves already carry their own step sizes, so
// tree stages ignore it.
struct Stage {
  BasisFunction basis;
  double coefficient = 1.0;
};

// F(x) = background(x) + sum_m shrinkage * beta_m * h_m(x), evaluated in
// stage order.
class BoostedEnsemble final : public Scorer {
 public:
  BoostedEnsemble(ScorerPtr background, double shrinkage);

  std::size_t feature_count() const override {
    return background_->feature_count();
  }
  double score(std::span<const double> features) const override;

  void add_stage(Stage stage);

  // Unshrunk beta_m * h_m(x) of one stage.
  double stage_output(std::size_t stage, std::span<const double> x) const;

  const ScorerPtr& background() const { return background_; }
  double shrinkage() const { return shrinkage_; }
  const std::vector<Stage>& stages() const { return stages_; }

 private:
  ScorerPtr background_;
  double shrinkage_;
  std::vector<Stage> stages_;
};

struct BoostConfig {
  int rounds = 500;
  double shrinkage = 0.5;
  int leaves = 20;
  int min_samples_per_leaf = 1;
  bool randomize = false;
  double sample_rate = 0.7;
  // LambdaSMART only: bound on |leaf value| before shrinkage; 0 leaves the
  // Newton step unbounded.
  double max_step = 0.0;
  uint64_t seed = 0;

  void validate() const;
  TreeConfig tree_config() const;
};

// Least-squares coefficient sum(y' h) / sum(h^2). Throws Degenerate when
// the basis is identically zero.
double optimal_beta(std::span<const double> residuals,
                    std::span<const double> basis_values);

// Residual error at the optimal beta: sum(y'^2) - sum(y' h)^2 / sum(h^2).
double ls_loss(std::span<const double> residuals,
               std::span<const double> basis_values);

// Called after each round with the round number (1-based) and the train
// Ave-NDCG of the ensemble so far.
using RoundObserver = std::function<void(int, double)>;

// Boosting with single-feature basis functions: every round picks the
// feature whose least-squares fit to the lambda residuals has the lowest
// loss (lowest index on ties) and adds shrinkage * beta * x[feature].
BoostedEnsemble lambda_boost(ScorerPtr background, const Dataset& train,
                             const BoostConfig& config,
                             const NdcgConfig& ndcg,
                             const RoundObserver& observer = {});

// Boosting with regression-tree basis functions: every round fits a tree to
// the lambda residuals and sets each leaf to sum(y') / sum(w) over its
// members before adding it with the shrinkage.
BoostedEnsemble lambda_smart(ScorerPtr background, const Dataset& train,
                             const BoostConfig& config,
                             const NdcgConfig& ndcg,
                             const RoundObserver& observer = {});

}  // namespace rankadapt

#endif  // RANKADAPT_BOOSTING_H_
