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

#ifndef RANKADAPT_INTERPOLATION_H_
#define RANKADAPT_INTERPOLATION_H_

#include <cstdint>
#include <span>
#include <vector>

#include "rankadapt/dataset.h"
#include "rankadapt/linear_ranker.h"
#include "rankadapt/metrics.h"
#include "rankadapt/scorer.h"

namespace rankadapt {

// Score(q, d) = sum_i alpha_i * Score_i(q, d), summed in component order.
class InterpolatedModel final : public Scorer {
 public:
  InterpolatedModel(std::vector<ScorerPtr> components,
                    std::vector<double> alphas);

  std::size_t feature_count() const override;
  double score(std::span<const double> features) const override;

  const std::vector<ScorerPtr>& components() const { return components_; }
  const std::vector<double>& alphas() const { return alphas_; }

 private:
  std::vector<ScorerPtr> components_;
  std::vector<double> alphas_;
};

struct PowellConfig {
  int max_iterations = 20;
  int line_search_grid = 201;
  double line_search_span = 2.0;
  int refine_levels = 3;
  double tolerance = 1e-6;
  uint64_t seed = 0;

  void validate() const;
};

struct PowellResult {
  std::vector<double> alphas;  // L1-normalized
  double objective = 0.0;      // validation Ave-NDCG at `alphas`
  double initial_objective = 0.0;
  int iterations = 0;
};

// Maximizes validation Ave-NDCG of the interpolated model over the weights
// with Powell's direction-set method, starting from uniform weights. Each
// line search scans a uniform grid over [-span, span] along the direction
// and then re-scans `refine_levels` times around the best point; among
// equal objective values the smallest step wins.
PowellResult optimize_weights_powell(std::span<const ScorerPtr> components,
                                     const Dataset& validation,
                                     const NdcgConfig& ndcg,
                                     const PowellConfig& config);

// Treats each component score as a feature and trains a linear LambdaRank
// model on the validation data; the learned weights are the alphas.
std::vector<double> optimize_weights_lambdarank(
    std::span<const ScorerPtr> components, const Dataset& validation,
    const LinearTrainConfig& config);

// The derived dataset used above: feature f of a document is component f's
// score for it.
Dataset component_score_dataset(std::span<const ScorerPtr> components,
                                const Dataset& dataset);

}  // namespace rankadapt

#endif  // RANKADAPT_INTERPOLATION_H_
