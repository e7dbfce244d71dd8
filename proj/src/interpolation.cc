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

#include "rankadapt/interpolation.h"

#include <algorithm>
#include <cmath>

#include "rankadapt/error.h"

namespace rankadapt {

InterpolatedModel::InterpolatedModel(std::vector<ScorerPtr> components,
                                     std::vector<double> alphas)
    : components_(std::move(components)), alphas_(std::move(alphas)) {
  if (components_.size() < 2) {
    throw InvalidInput("interpolation needs at least 2 component models");
  }
  if (alphas_.size() != components_.size()) {
    throw InvalidInput("interpolation: one alpha per component required");
  }
  for (const auto& c : components_) {
    if (!c) throw InvalidInput("interpolation: null component");
    check_dimension(components_.front()->feature_count(), c->feature_count(),
                    "interpolation component");
  }
  bool any_nonzero = false;
  for (double a : alphas_) {
    if (!std::isfinite(a)) throw InvalidInput("interpolation alpha not finite");
    any_nonzero = any_nonzero || a != 0.0;
  }
  if (!any_nonzero) throw InvalidInput("interpolation alphas are all zero");
}

std::size_t InterpolatedModel::feature_count() const {
  return components_.front()->feature_count();
}

double InterpolatedModel::score(std::span<const double> features) const {
  double s = 0.0;
  for (std::size_t i = 0; i < components_.size(); ++i) {
    s += alphas_[i] * components_[i]->score(features);
  }
  return s;
}

void PowellConfig::validate() const {
  if (max_iterations < 1) throw InvalidInput("max iterations must be >= 1");
  if (line_search_grid < 2) throw InvalidInput("line search grid must be >= 2");
  if (!(line_search_span > 0.0)) {
    throw InvalidInput("line search span must be > 0");
  }
  if (refine_levels < 1) throw InvalidInput("refine levels must be >= 1");
  if (!(tolerance > 0.0)) throw InvalidInput("tolerance must be > 0");
}

namespace {

using Point = std::vector<double>;

// Validation Ave-NDCG as a function of the weights, over cached component
// scores. Combination order matches InterpolatedModel::score exactly.
class Objective {
 public:
  Objective(std::span<const ScorerPtr> components, const Dataset& validation,
            const NdcgConfig& ndcg)
      : validation_(validation), ndcg_(ndcg) {
    for (const auto& c : components) {
      cached_.push_back(score_dataset(*c, validation));
    }
    combined_ = cached_.front();
  }

  double operator()(const Point& alphas) {
    for (std::size_t q = 0; q < combined_.size(); ++q) {
      for (std::size_t d = 0; d < combined_[q].size(); ++d) {
        double s = 0.0;
        for (std::size_t i = 0; i < alphas.size(); ++i) {
          s += alphas[i] * cached_[i][q][d];
        }
        combined_[q][d] = s;
      }
    }
    return ave_ndcg(validation_, combined_, ndcg_);
  }

 private:
  const Dataset& validation_;
  const NdcgConfig& ndcg_;
  std::vector<QueryScores> cached_;
  QueryScores combined_;
};

Point along(const Point& p, const Point& d, double t) {
  Point out(p.size());
  for (std::size_t i = 0; i < p.size(); ++i) out[i] = p[i] + t * d[i];
  return out;
}

struct LineResult {
  double step = 0.0;
  double value = 0.0;
};

// Grid scan plus refinement. Starts from step 0 with the known value, so the
// result is never worse than the current point.
LineResult line_search(Objective& f, const Point& p, const Point& d,
                       double current, const PowellConfig& cfg) {
  LineResult best{0.0, current};
  auto consider = [&](double t) {
    if (t == 0.0) return;
    const double v = f(along(p, d, t));
    const bool better =
        v > best.value ||
        (v == best.value &&
         (std::abs(t) < std::abs(best.step) ||
          (std::abs(t) == std::abs(best.step) && t < best.step)));
    if (better) best = {t, v};
  };

  const int grid = cfg.line_search_grid;
  double lo = -cfg.line_search_span;
  double spacing = 2.0 * cfg.line_search_span / (grid - 1);
  for (int level = 0; level <= cfg.refine_levels; ++level) {
    for (int k = 0; k < grid; ++k) consider(lo + k * spacing);
    lo = best.step - spacing;
    spacing = 2.0 * spacing / (grid - 1);
  }
  return best;
}

Point unit(Point d) {
  double norm = 0.0;
  for (double v : d) norm += v * v;
  norm = std::sqrt(norm);
  if (norm > 0.0) {
    for (double& v : d) v /= norm;
  }
  return d;
}

}  // namespace

PowellResult optimize_weights_powell(std::span<const ScorerPtr> components,
                                     const Dataset& validation,
                                     const NdcgConfig& ndcg,
                                     const PowellConfig& config) {
  config.validate();
  ndcg.validate();
  if (components.size() < 2) {
    throw InvalidInput("interpolation needs at least 2 component models");
  }
  for (const auto& c : components) {
    check_dimension(validation.feature_count(), c->feature_count(),
                    "interpolation component vs validation data");
  }
  const std::size_t n = components.size();
  Objective f(components, validation, ndcg);

  Point p(n, 1.0 / static_cast<double>(n));
  double fp = f(p);
  PowellResult result;
  result.initial_objective = fp;

  std::vector<Point> dirs(n, Point(n, 0.0));
  for (std::size_t i = 0; i < n; ++i) dirs[i][i] = 1.0;

  for (int iter = 1; iter <= config.max_iterations; ++iter) {
    result.iterations = iter;
    const Point start = p;
    const double f_start = fp;
    double biggest_gain = 0.0;
    std::size_t biggest_dir = 0;

    for (std::size_t i = 0; i < n; ++i) {
      const double before = fp;
      const auto line = line_search(f, p, dirs[i], fp, config);
      p = along(p, dirs[i], line.step);
      fp = line.value;
      if (fp - before > biggest_gain) {
        biggest_gain = fp - before;
        biggest_dir = i;
      }
    }
    if (fp - f_start < config.tolerance) break;

    // Direction-set update (Press et al.), written for minimizing -f.
    Point moved(n);
    for (std::size_t i = 0; i < n; ++i) moved[i] = p[i] - start[i];
    const double f_extra = f(along(p, moved, 1.0));
    const double F0 = -f_start;
    const double FN = -fp;
    const double FE = -f_extra;
    if (FE < F0) {
      const double a = F0 - FN - biggest_gain;
      const double t =
          2.0 * (F0 - 2.0 * FN + FE) * a * a - biggest_gain * (F0 - FE) * (F0 - FE);
      if (t < 0.0) {
        const Point d = unit(moved);
        const auto line = line_search(f, p, d, fp, config);
        p = along(p, d, line.step);
        fp = line.value;
        dirs[biggest_dir] = dirs.back();
        dirs.back() = d;
      }
    }
  }

  // Report L1-normalized weights; positive rescaling preserves every ranking
  // up to rounding, and the reported objective is recomputed at the returned
  // point so the two always agree.
  double l1 = 0.0;
  for (double a : p) l1 += std::abs(a);
  Point normalized = p;
  if (l1 > 0.0) {
    for (double& a : normalized) a /= l1;
  }
  const double f_normalized = f(normalized);
  if (l1 > 0.0 && f_normalized >= fp) {
    result.alphas = std::move(normalized);
    result.objective = f_normalized;
  } else {
    result.alphas = std::move(p);
    result.objective = fp;
  }
  return result;
}

Dataset component_score_dataset(std::span<const ScorerPtr> components,
                                const Dataset& dataset) {
  std::vector<Query> queries;
  queries.reserve(dataset.query_count());
  for (const auto& q : dataset.queries()) {
    Query derived{q.qid, {}};
    for (const auto& d : q.documents) {
      Document doc{d.label, {}};
      for (const auto& c : components) doc.features.push_back(c->score(d.features));
      derived.documents.push_back(std::move(doc));
    }
    queries.push_back(std::move(derived));
  }
  return Dataset::make(std::move(queries), components.size());
}

std::vector<double> optimize_weights_lambdarank(
    std::span<const ScorerPtr> components, const Dataset& validation,
    const LinearTrainConfig& config) {
  if (components.size() < 2) {
    throw InvalidInput("interpolation needs at least 2 component models");
  }
  for (const auto& c : components) {
    check_dimension(validation.feature_count(), c->feature_count(),
                    "interpolation component vs validation data");
  }
  const auto derived = component_score_dataset(components, validation);
  return train_linear_lambdarank(derived, config).weights();
}

}  // namespace rankadapt
