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

#include "rankadapt/lambda.h"

#include "rankadapt/error.h"

namespace rankadapt {

double pair_cost(double s_i, double s_j) {
  const double o = s_i - s_j;
  if (o >= 0.0) return std::log1p(std::exp(-o));
  return -o + std::log1p(std::exp(o));
}

double pair_cost_gradient(double o) {
  if (o >= 0.0) {
    const double e = std::exp(-o);
    return -e / (1.0 + e);
  }
  return -1.0 / (1.0 + std::exp(o));
}

LambdaGradients compute_lambdas(const Query& query,
                                std::span<const double> scores,
                                const NdcgConfig& config) {
  const std::size_t n = query.size();
  if (scores.size() != n) {
    throw InvalidInput("compute_lambdas: " + std::to_string(scores.size()) +
                       " scores for " + std::to_string(n) + " documents");
  }
  LambdaGradients out{std::vector<double>(n, 0.0),
                      std::vector<double>(n, 0.0)};

  const auto labels = query.labels();
  for_each_lambda_pair(labels, scores, config,
                       [&](std::size_t hi, std::size_t lo, double lambda,
                           double weight) {
                         out.residuals[hi] += lambda;
                         out.residuals[lo] -= lambda;
                         out.newton_weights[hi] += weight;
                         out.newton_weights[lo] += weight;
                       });
  return out;
}

std::vector<LambdaGradients> compute_lambdas(const Dataset& dataset,
                                             const QueryScores& scores,
                                             const NdcgConfig& config) {
  if (scores.size() != dataset.query_count()) {
    throw InvalidInput("compute_lambdas: score table does not match dataset");
  }
  std::vector<LambdaGradients> out;
  out.reserve(dataset.query_count());
  for (std::size_t q = 0; q < dataset.query_count(); ++q) {
    out.push_back(compute_lambdas(dataset.query(q), scores[q], config));
  }
  return out;
}

}  // namespace rankadapt
