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

#include "rankadapt/boosting.h"

#include <algorithm>
#include <cmath>
#include <string>

#include "rankadapt/error.h"
#include "rankadapt/lambda.h"
#include "rankadapt/random.h"

namespace rankadapt {

BoostedEnsemble::BoostedEnsemble(ScorerPtr background, double shrinkage)
    : background_(std::move(background)), shrinkage_(shrinkage) {
  if (!background_) throw InvalidInput("ensemble needs a background model");
  if (!(shrinkage_ > 0.0 && shrinkage_ <= 1.0)) {
    throw InvalidInput("shrinkage must be in (0, 1]");
  }
}

void BoostedEnsemble::add_stage(Stage stage) {
  if (const auto* single = std::get_if<SingleFeatureBasis>(&stage.basis)) {
    if (single->feature_index >= feature_count()) {
      throw InvalidInput("stage feature index out of range");
    }
    if (!std::isfinite(stage.coefficient)) {
      throw InvalidInput("stage coefficient not finite");
    }
  } else if (std::get<RegressionTree>(stage.basis).feature_count() !=
             feature_count()) {
    throw InvalidInput("stage tree dimensionality mismatch");
  }
  stages_.push_back(std::move(stage));
}

double BoostedEnsemble::stage_output(std::size_t stage,
                                     std::span<const double> x) const {
  const Stage& s = stages_.at(stage);
  if (const auto* single = std::get_if<SingleFeatureBasis>(&s.basis)) {
    return s.coefficient * x[single->feature_index];
  }
  return std::get<RegressionTree>(s.basis).predict(x);
}

double BoostedEnsemble::score(std::span<const double> features) const {
  double s = background_->score(features);
  for (std::size_t m = 0; m < stages_.size(); ++m) {
    s += shrinkage_ * stage_output(m, features);
  }
  return s;
}

void BoostConfig::validate() const {
  if (rounds < 1) throw InvalidInput("rounds must be >= 1");
  if (!(shrinkage > 0.0 && shrinkage <= 1.0)) {
    throw InvalidInput("shrinkage must be in (0, 1]");
  }
  if (!(max_step >= 0.0) || !std::isfinite(max_step)) {
    throw InvalidInput("max step must be finite and >= 0");
  }
  tree_config().validate();
}

TreeConfig BoostConfig::tree_config() const {
  return TreeConfig{leaves, min_samples_per_leaf, randomize, sample_rate};
}

double optimal_beta(std::span<const double> residuals,
                    std::span<const double> basis_values) {
  if (residuals.size() != basis_values.size()) {
    throw InvalidInput("optimal_beta: length mismatch");
  }
  double num = 0.0;
  double den = 0.0;
  for (std::size_t i = 0; i < residuals.size(); ++i) {
    num += residuals[i] * basis_values[i];
    den += basis_values[i] * basis_values[i];
  }
  if (den == 0.0) throw Degenerate("degenerate basis");
  return num / den;
}

double ls_loss(std::span<const double> residuals,
               std::span<const double> basis_values) {
  if (residuals.size() != basis_values.size()) {
    throw InvalidInput("ls_loss: length mismatch");
  }
  double yy = 0.0;
  double yh = 0.0;
  double hh = 0.0;
  for (std::size_t i = 0; i < residuals.size(); ++i) {
    yy += residuals[i] * residuals[i];
    yh += residuals[i] * basis_values[i];
    hh += basis_values[i] * basis_values[i];
  }
  if (hh == 0.0) throw Degenerate("degenerate basis");
  return yy - yh * yh / hh;
}

namespace {

// Working state shared by both boosting loops: current scores per query and
// the flattened lambda gradients.
class BoostState {
 public:
  BoostState(const Scorer& background, const Dataset& train,
             const NdcgConfig& ndcg)
      : train_(train), ndcg_(ndcg), scores_(score_dataset(background, train)) {
    residuals_.resize(train.document_count());
    weights_.resize(train.document_count());
  }

  void compute_gradients() {
    std::size_t row = 0;
    for (std::size_t q = 0; q < train_.query_count(); ++q) {
      const auto g = compute_lambdas(train_.query(q), scores_[q], ndcg_);
      for (std::size_t i = 0; i < g.residuals.size(); ++i, ++row) {
        residuals_[row] = g.residuals[i];
        weights_[row] = g.newton_weights[i];
      }
    }
  }

  // scores += step(row) for every document, rows in dataset order.
  template <typename Step>
  void update(Step step) {
    std::size_t row = 0;
    for (auto& query_scores : scores_) {
      for (double& s : query_scores) s += step(row++);
    }
  }

  double train_ave_ndcg() const { return ave_ndcg(train_, scores_, ndcg_); }

  const std::vector<double>& residuals() const { return residuals_; }
  const std::vector<double>& weights() const { return weights_; }

 private:
  const Dataset& train_;
  const NdcgConfig& ndcg_;
  QueryScores scores_;
  std::vector<double> residuals_;
  std::vector<double> weights_;
};

void check_inputs(const ScorerPtr& background, const Dataset& train,
                  const BoostConfig& config, const NdcgConfig& ndcg) {
  config.validate();
  ndcg.validate();
  if (!background) throw InvalidInput("boosting needs a background model");
  if (train.empty()) throw InvalidInput("cannot boost on an empty dataset");
  check_dimension(background->feature_count(), train.feature_count(),
                  "background model vs training data");
}

}  // namespace

BoostedEnsemble lambda_boost(ScorerPtr background, const Dataset& train,
                             const BoostConfig& config,
                             const NdcgConfig& ndcg,
                             const RoundObserver& observer) {
  check_inputs(background, train, config, ndcg);
  const auto samples = FeatureMatrix::from_dataset(train);
  const std::size_t n = samples.rows();
  const std::size_t dims = samples.cols();

  std::vector<double> col_sq(dims, 0.0);
  for (std::size_t r = 0; r < n; ++r) {
    for (std::size_t f = 0; f < dims; ++f) {
      col_sq[f] += samples.at(r, f) * samples.at(r, f);
    }
  }
  bool any_usable = false;
  for (double s : col_sq) any_usable = any_usable || s > 0.0;
  if (!any_usable) throw Degenerate("all features degenerate");

  BoostedEnsemble ensemble(background, config.shrinkage);
  BoostState state(*background, train, ndcg);
  std::vector<double> cross(dims);

  for (int round = 1; round <= config.rounds; ++round) {
    state.compute_gradients();
    const auto& y = state.residuals();
    double yy = 0.0;
    std::fill(cross.begin(), cross.end(), 0.0);
    for (std::size_t r = 0; r < n; ++r) {
      yy += y[r] * y[r];
      for (std::size_t f = 0; f < dims; ++f) cross[f] += y[r] * samples.at(r, f);
    }

    std::size_t best = dims;
    double best_loss = 0.0;
    for (std::size_t f = 0; f < dims; ++f) {
      if (col_sq[f] == 0.0) continue;
      const double loss = yy - cross[f] * cross[f] / col_sq[f];
      if (best == dims || loss < best_loss) {
        best = f;
        best_loss = loss;
      }
    }
    const double beta = cross[best] / col_sq[best];
    ensemble.add_stage(Stage{SingleFeatureBasis{best}, beta});

    const double step = config.shrinkage * beta;
    state.update([&](std::size_t r) { return step * samples.at(r, best); });
    if (observer) observer(round, state.train_ave_ndcg());
  }
  return ensemble;
}

BoostedEnsemble lambda_smart(ScorerPtr background, const Dataset& train,
                             const BoostConfig& config,
                             const NdcgConfig& ndcg,
                             const RoundObserver& observer) {
  check_inputs(background, train, config, ndcg);
  const auto samples = FeatureMatrix::from_dataset(train);
  const auto tree_config = config.tree_config();

  BoostedEnsemble ensemble(background, config.shrinkage);
  BoostState state(*background, train, ndcg);
  Rng rng(config.seed);

  for (int round = 1; round <= config.rounds; ++round) {
    state.compute_gradients();
    auto tree =
        fit_regression_tree(samples, state.residuals(), tree_config, rng);
    set_newton_leaf_values(tree, samples, state.residuals(), state.weights());
    for (std::size_t i = 0; i < tree.nodes().size(); ++i) {
      const auto& node = tree.nodes()[i];
      if (!node.is_leaf()) continue;
      // Near-zero Newton weights under a large residual; usually a leaf of
      // a few badly misordered documents.
      if (!std::isfinite(node.value)) {
        throw Degenerate("non-finite leaf value in round " +
                         std::to_string(round) +
                         "; set a max step or raise min samples per leaf");
      }
      if (config.max_step > 0.0) {
        tree.set_leaf_value(
            i, std::clamp(node.value, -config.max_step, config.max_step));
      }
    }

    std::vector<double> outputs(samples.rows());
    for (std::size_t r = 0; r < samples.rows(); ++r) {
      outputs[r] = config.shrinkage * tree.predict(samples.row(r));
    }
    ensemble.add_stage(Stage{std::move(tree), 1.0});
    state.update([&](std::size_t r) { return outputs[r]; });
    if (observer) observer(round, state.train_ave_ndcg());
  }
  return ensemble;
}

}  // namespace rankadapt
