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

#include <doctest.h>

#include <cmath>
#include <numeric>

#include "fixtures.h"
#include "rankadapt/error.h"
#include "rankadapt/lambda.h"

namespace rankadapt {
namespace {

using testing::make_query;

TEST_CASE("pair_cost values") {
  CHECK(pair_cost(0.3, 0.3) == doctest::Approx(std::log(2.0)).epsilon(1e-15));
  CHECK(pair_cost(100.0, 0.0) < 1e-40);
  CHECK(pair_cost(100.0, 0.0) >= 0.0);
  CHECK(pair_cost(0.0, 800.0) == doctest::Approx(800.0));
  CHECK(std::isfinite(pair_cost(-800.0, 800.0)));
  CHECK(pair_cost(1.0, 3.0) ==
        doctest::Approx(2.1269280110429727).epsilon(1e-14));
}

TEST_CASE("pair_cost_gradient values and limits") {
  CHECK(pair_cost_gradient(0.0) == -0.5);
  CHECK(pair_cost_gradient(800.0) <= 0.0);
  CHECK(pair_cost_gradient(800.0) > -1e-300);
  CHECK(pair_cost_gradient(-800.0) == -1.0);
  CHECK(pair_cost_gradient(40.0) < 0.0);
  CHECK(pair_cost_gradient(-30.0) > -1.0);
}

TEST_CASE("pair_cost_gradient matches central differences") {
  const double h = 1e-5;
  for (double o : {-2.0, -0.5, 0.3, 4.0}) {
    const double fd = (pair_cost(o + h, 0.0) - pair_cost(o - h, 0.0)) / (2 * h);
    CHECK(std::abs(fd - pair_cost_gradient(o)) < 1e-6);
  }
}

TEST_CASE("compute_lambdas on two documents") {
  NdcgConfig cfg;
  cfg.truncation = 2;
  const auto g = compute_lambdas(make_query("q", {4, 0}),
                                 std::vector<double>{0.0, 0.0}, cfg);
  const double delta = 0.3690702464285426;
  CHECK(g.residuals[0] == doctest::Approx(delta * 0.5).epsilon(1e-13));
  CHECK(g.residuals[1] == doctest::Approx(-delta * 0.5).epsilon(1e-13));
  CHECK(g.newton_weights[0] == doctest::Approx(delta * 0.25).epsilon(1e-13));
  CHECK(g.newton_weights[1] == doctest::Approx(delta * 0.25).epsilon(1e-13));
  CHECK(g.residuals[0] == -g.residuals[1]);
}

TEST_CASE("Newton weight survives a badly misordered pair") {
  NdcgConfig cfg;
  cfg.truncation = 2;
  const auto g = compute_lambdas(make_query("q", {4, 0}),
                                 std::vector<double>{0.0, 40.0}, cfg);
  const double delta = 0.3690702464285426;
  const double e = std::exp(-40.0);
  CHECK(g.residuals[0] == doctest::Approx(delta).epsilon(1e-13));
  CHECK(g.newton_weights[0] > 0.0);
  CHECK(g.newton_weights[0] ==
        doctest::Approx(delta * e / ((1 + e) * (1 + e))).epsilon(1e-12));
}

TEST_CASE("compute_lambdas with equal labels is zero") {
  const auto g = compute_lambdas(make_query("q", {2, 2, 2}),
                                 std::vector<double>{1, -1, 3}, NdcgConfig{});
  for (double r : g.residuals) CHECK(r == 0.0);
  for (double w : g.newton_weights) CHECK(w == 0.0);
  const auto z = compute_lambdas(make_query("q", {0, 0}),
                                 std::vector<double>{1, 2}, NdcgConfig{});
  CHECK(z.residuals == std::vector<double>{0.0, 0.0});
}

TEST_CASE("compute_lambdas rejects length mismatch") {
  CHECK_THROWS_AS(compute_lambdas(make_query("q", {1, 0}),
                                  std::vector<double>{1.0}, NdcgConfig{}),
                  InvalidInput);
}

TEST_CASE("lambda invariants on random queries") {
  Rng rng(2024);
  const NdcgConfig cfg;
  for (int t = 0; t < 100; ++t) {
    const auto q = testing::random_query(rng, 10, 1, "q");
    const auto s = testing::random_scores(rng, q.size());
    const auto g = compute_lambdas(q, s, cfg);
    const double sum = std::accumulate(g.residuals.begin(), g.residuals.end(), 0.0);
    CHECK(std::abs(sum) < 1e-12);
    for (double w : g.newton_weights) CHECK(w >= 0.0);

    const auto labels = q.labels();
    const bool any_relevant =
        *std::max_element(labels.begin(), labels.end()) > 0;
    // With <= 10 documents every position is inside the cutoff, so a
    // document with a distinct-label partner always gets positive weight.
    for (std::size_t i = 0; i < q.size(); ++i) {
      bool has_partner = false;
      for (std::size_t j = 0; j < q.size(); ++j) {
        has_partner = has_partner || labels[j] != labels[i];
      }
      if (has_partner && any_relevant) CHECK(g.newton_weights[i] > 0.0);
    }

    // Top-labeled document ranked below a lower-labeled one is pushed up.
    const auto top = static_cast<std::size_t>(
        std::max_element(labels.begin(), labels.end()) - labels.begin());
    bool beaten = false;
    for (std::size_t j = 0; j < q.size(); ++j) {
      beaten = beaten || (labels[j] < labels[top] && s[j] > s[top]);
    }
    if (beaten) CHECK(g.residuals[top] >= 0.0);

    // Positive rescaling keeps each pair's direction: residual signs of a
    // two-document query do not change.
    std::vector<double> scaled(s);
    for (double& v : scaled) v *= 3.5;
    const auto g2 = compute_lambdas(q, scaled, cfg);
    if (q.size() == 2) {
      CHECK((g.residuals[0] > 0) == (g2.residuals[0] > 0));
    }
  }
}

}  // namespace
}  // namespace rankadapt
