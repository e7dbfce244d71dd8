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

#include "rankadapt/linear_ranker.h"

#include <cmath>
#include <numeric>
#include <string>

#include "rankadapt/error.h"
#include "rankadapt/lambda.h"
#include "rankadapt/random.h"

namespace rankadapt {

LinearModel::LinearModel(std::vector<double> weights)
    : weights_(std::move(weights)) {
  if (weights_.empty()) throw InvalidInput("linear model needs >= 1 weight");
  for (double w : weights_) {
    if (!std::isfinite(w)) throw InvalidInput("linear model weight not finite");
  }
}

double LinearModel::score(std::span<const double> features) const {
  check_dimension(weights_.size(), features.size(), "linear model");
  double s = 0.0;
  for (std::size_t f = 0; f < weights_.size(); ++f) {
    s += weights_[f] * features[f];
  }
  return s;
}

void LinearTrainConfig::validate() const {
  if (epochs < 1) throw InvalidInput("epochs must be >= 1");
  if (!(learning_rate > 0.0)) throw InvalidInput("learning rate must be > 0");
  ndcg.validate();
}

LinearModel train_linear_lambdarank(const Dataset& dataset,
                                    const LinearTrainConfig& config) {
  config.validate();
  if (dataset.empty()) throw InvalidInput("cannot train on an empty dataset");

  const std::size_t dims = dataset.feature_count();
  std::vector<double> w(dims, 0.0);
  std::vector<std::size_t> order(dataset.query_count());
  std::iota(order.begin(), order.end(), std::size_t{0});
  Rng rng(config.seed);

  std::vector<std::vector<int>> labels;
  for (const auto& q : dataset.queries()) labels.push_back(q.labels());

  std::vector<double> scores;
  std::vector<double> step(dims);
  for (int epoch = 1; epoch <= config.epochs; ++epoch) {
    if (config.shuffle) rng.shuffle(std::span<std::size_t>(order));
    for (std::size_t qi : order) {
      const Query& query = dataset.query(qi);
      scores.clear();
      for (const auto& d : query.documents) {
        scores.push_back(std::inner_product(w.begin(), w.end(),
                                            d.features.begin(), 0.0));
      }
      // sum_i residual_i * x_i, accumulated per pair as
      // lambda * (x_hi - x_lo) so features constant within the query
      // contribute exactly zero.
      std::fill(step.begin(), step.end(), 0.0);
      for_each_lambda_pair(
          labels[qi], scores, config.ndcg,
          [&](std::size_t hi, std::size_t lo, double lambda, double) {
            const auto& x_hi = query.documents[hi].features;
            const auto& x_lo = query.documents[lo].features;
            for (std::size_t f = 0; f < dims; ++f) {
              step[f] += lambda * (x_hi[f] - x_lo[f]);
            }
          });
      for (std::size_t f = 0; f < dims; ++f) {
        w[f] += config.learning_rate * step[f];
        if (!std::isfinite(w[f])) {
          throw Degenerate("non-finite weight update in epoch " +
                           std::to_string(epoch));
        }
      }
    }
  }
  return LinearModel(std::move(w));
}

}  // namespace rankadapt
