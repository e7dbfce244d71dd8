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

#ifndef RANKADAPT_LAMBDA_H_
#define RANKADAPT_LAMBDA_H_

#include <algorithm>
#include <cmath>
#include <span>
#include <vector>

#include "rankadapt/dataset.h"
#include "rankadapt/metrics.h"
#include "rankadapt/scorer.h"

namespace rankadapt {

// Per-document lambda residuals y' and their derivatives w = dy'/ds, the
// Newton denominators used for tree leaf values.
struct LambdaGradients {
  std::vector<double> residuals;
  std::vector<double> newton_weights;
};

// Cross-entropy pair cost C = s_j - s_i + log(1 + exp(s_i - s_j)).
double pair_cost(double s_i, double s_j);

// dC/do at o = s_i - s_j, i.e. -1 / (1 + exp(o)). Lies in (-1, 0).
double pair_cost_gradient(double o);

// Visits every pair with distinct labels and nonzero |delta NDCG| as
// visit(hi, lo, lambda, weight), hi being the higher-labeled document,
// lambda = g * rho and weight = g * rho * (1 - rho) (see compute_lambdas).
// Pairs are visited in (a, b), a < b index order.
template <typename Visitor>
void for_each_lambda_pair(std::span<const int> labels,
                          std::span<const double> scores,
                          const NdcgConfig& config, Visitor&& visit) {
  const std::size_t n = labels.size();
  const double idcg = ideal_dcg(labels, config.truncation);
  if (idcg == 0.0) return;

  // Discount at each document's current position (0 past the truncation).
  const auto order = rank_order(scores);
  const auto k = static_cast<std::size_t>(config.truncation);
  std::vector<double> disc(n, 0.0);
  for (std::size_t r = 0; r < std::min(n, k); ++r) disc[order[r]] = discount(r);

  for (std::size_t a = 0; a < n; ++a) {
    for (std::size_t b = a + 1; b < n; ++b) {
      if (labels[a] == labels[b]) continue;
      const std::size_t hi = labels[a] > labels[b] ? a : b;
      const std::size_t lo = hi == a ? b : a;
      const double g = std::abs((gain(labels[hi]) - gain(labels[lo])) *
                                (disc[lo] - disc[hi])) /
                       idcg;
      if (g == 0.0) continue;
      const double o = scores[hi] - scores[lo];
      const double rho = -pair_cost_gradient(o);
      // 1 - rho from the other tail; the subtraction rounds to 0 near rho = 1.
      const double rho_c = -pair_cost_gradient(-o);
      visit(hi, lo, g * rho, g * rho * rho_c);
    }
  }
}

// For every pair with distinct labels, with i the higher-labeled document,
// rho = 1 / (1 + exp(s_i - s_j)) and g = |delta NDCG(i, j)|:
//   residuals[i] += g * rho, residuals[j] -= g * rho,
//   newton_weights[i] and [j] += g * rho * (1 - rho).
// Queries without a relevant document get all-zero gradients.
LambdaGradients compute_lambdas(const Query& query,
                                std::span<const double> scores,
                                const NdcgConfig& config);

// compute_lambdas for every query, in dataset order.
std::vector<LambdaGradients> compute_lambdas(const Dataset& dataset,
                                             const QueryScores& scores,
                                             const NdcgConfig& config);

}  // namespace rankadapt

#endif  // RANKADAPT_LAMBDA_H_
