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

#ifndef RANKADAPT_LINEAR_RANKER_H_
#define RANKADAPT_LINEAR_RANKER_H_

#include <cstdint>
#include <span>
#include <vector>

#include "rankadapt/dataset.h"
#include "rankadapt/metrics.h"
#include "rankadapt/scorer.h"

namespace rankadapt {

// y = w . x. No bias: NDCG only sees score differences within a query.
class LinearModel final : public Scorer {
 public:
  explicit LinearModel(std::vector<double> weights);

  std::size_t feature_count() const override { return weights_.size(); }
  double score(std::span<const double> features) const override;

  const std::vector<double>& weights() const { return weights_; }

 private:
  std::vector<double> weights_;
};

struct LinearTrainConfig {
  int epochs = 100;
  double learning_rate = 1e-5;
  uint64_t seed = 0;
  bool shuffle = true;
  NdcgConfig ndcg;

  void validate() const;
};

// Linear LambdaRank: starting from w = 0, each epoch visits the queries
// (shuffled per epoch when configured) and applies
//   w += learning_rate * sum_i residual_i * x_i
// with the lambda residuals of the query at the current weights.
// Throws Degenerate naming the epoch if a weight becomes non-finite.
LinearModel train_linear_lambdarank(const Dataset& dataset,
                                    const LinearTrainConfig& config);

}  // namespace rankadapt

#endif  // RANKADAPT_LINEAR_RANKER_H_
