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

#include "rankadapt/synth.h"

#include <algorithm>
#include <cmath>
#include <functional>
#include <string>
#include <vector>

#include "rankadapt/error.h"
#include "rankadapt/random.h"

namespace rankadapt {
namespace {

using Latent = std::function<double(const std::vector<double>&)>;

std::vector<double> normal_vector(Rng& rng, std::size_t n) {
  std::vector<double> v(n);
  for (auto& x : v) x = rng.normal();
  return v;
}

std::vector<double> mix(double a, const std::vector<double>& x,
                        const std::vector<double>& y) {
  std::vector<double> out(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) {
    out[i] = a * x[i] + (1.0 - a) * y[i];
  }
  return out;
}

double dot(const std::vector<double>& w, const std::vector<double>& x) {
  double s = 0.0;
  for (std::size_t i = 0; i < w.size(); ++i) s += w[i] * x[i];
  return s;
}

int grade(double z, const std::vector<double>& cuts) {
  return static_cast<int>(std::upper_bound(cuts.begin(), cuts.end(), z) -
                          cuts.begin());
}

Dataset make_set(const ShiftProfile& p, Rng& rng, const std::string& prefix,
                 std::size_t queries, const Latent& latent,
                 double label_noise) {
  std::vector<Query> out(queries);
  std::vector<double> z;
  z.reserve(queries * p.docs_per_query);
  for (std::size_t q = 0; q < queries; ++q) {
    out[q].qid = prefix + std::to_string(q);
    double offset = p.query_offset_sd * rng.normal();
    for (std::size_t d = 0; d < p.docs_per_query; ++d) {
      Document doc;
      doc.features.resize(p.feature_count);
      for (auto& x : doc.features) x = rng.uniform();
      z.push_back(latent(doc.features) + offset + p.noise_sd * rng.normal());
      out[q].documents.push_back(std::move(doc));
    }
  }

  std::vector<double> sorted = z;
  std::sort(sorted.begin(), sorted.end());
  std::vector<double> cuts;
  for (double f : p.grade_quantiles) {
    auto i = static_cast<std::size_t>(f * static_cast<double>(sorted.size()));
    cuts.push_back(sorted[std::min(i, sorted.size() - 1)]);
  }

  std::size_t k = 0;
  for (auto& q : out) {
    for (auto& d : q.documents) {
      d.label = grade(z[k++], cuts);
      if (label_noise > 0.0 && rng.uniform() < label_noise) {
        d.label = static_cast<int>(rng.below(kMaxLabel + 1));
      }
    }
  }
  return Dataset::make(std::move(out), p.feature_count);
}

}  // namespace

void ShiftProfile::validate() const {
  if (feature_count < 3) throw InvalidInput("feature_count must be >= 3");
  if (docs_per_query < 2) throw InvalidInput("docs_per_query must be >= 2");
  for (auto n : {background_queries, in_domain_queries, validation_queries,
                 closed_test_queries, open_test_queries}) {
    if (n == 0) throw InvalidInput("every set needs at least one query");
  }
  for (double f : {in_domain_mix, open_drift, open_label_noise}) {
    if (!(f >= 0.0 && f <= 1.0)) {
      throw InvalidInput("mix, drift and label noise must lie in [0, 1]");
    }
  }
  if (!(noise_sd >= 0.0) || !(query_offset_sd >= 0.0) ||
      !std::isfinite(interaction)) {
    throw InvalidInput("noise scales must be >= 0");
  }
  if (grade_quantiles.size() != kMaxLabel ||
      !std::is_sorted(grade_quantiles.begin(), grade_quantiles.end()) ||
      grade_quantiles.front() <= 0.0 || grade_quantiles.back() >= 1.0) {
    throw InvalidInput("grade_quantiles must be 4 increasing values in (0, 1)");
  }
}

nlohmann::json ShiftProfile::to_json() const {
  return {
      {"profile", "shift"},
      {"feature_count", feature_count},
      {"docs_per_query", docs_per_query},
      {"background_queries", background_queries},
      {"in_domain_queries", in_domain_queries},
      {"validation_queries", validation_queries},
      {"closed_test_queries", closed_test_queries},
      {"open_test_queries", open_test_queries},
      {"in_domain_mix", in_domain_mix},
      {"open_drift", open_drift},
      {"interaction", interaction},
      {"noise_sd", noise_sd},
      {"query_offset_sd", query_offset_sd},
      {"open_label_noise", open_label_noise},
      {"grade_quantiles", grade_quantiles},
  };
}

ShiftProfile ShiftProfile::from_json(const nlohmann::json& doc) {
  ShiftProfile p;
  auto get = [&](const char* key, auto& field) {
    if (doc.contains(key)) doc.at(key).get_to(field);
  };
  get("feature_count", p.feature_count);
  get("docs_per_query", p.docs_per_query);
  get("background_queries", p.background_queries);
  get("in_domain_queries", p.in_domain_queries);
  get("validation_queries", p.validation_queries);
  get("closed_test_queries", p.closed_test_queries);
  get("open_test_queries", p.open_test_queries);
  get("in_domain_mix", p.in_domain_mix);
  get("open_drift", p.open_drift);
  get("interaction", p.interaction);
  get("noise_sd", p.noise_sd);
  get("query_offset_sd", p.query_offset_sd);
  get("open_label_noise", p.open_label_noise);
  get("grade_quantiles", p.grade_quantiles);
  p.validate();
  return p;
}

ShiftData generate_shift(const ShiftProfile& p, uint64_t seed) {
  p.validate();
  Rng rng(seed);
  const auto w_bg = normal_vector(rng, p.feature_count);
  const auto w_own = normal_vector(rng, p.feature_count);
  const auto w_in = mix(p.in_domain_mix, w_bg, w_own);
  const auto w_open = mix(p.open_drift, w_bg, w_in);

  // Conjunction on features 0 and 1, penalty on low feature 2.
  const double a = p.interaction;
  Latent background = [&](const auto& x) { return dot(w_bg, x); };
  Latent in_domain = [&](const auto& x) {
    double t = (x[0] > 0.5 && x[1] > 0.5) ? a : 0.0;
    if (x[2] < 0.3) t -= a;
    return dot(w_in, x) + t;
  };
  Latent open = [&](const auto& x) { return dot(w_open, x); };

  ShiftData out;
  out.background =
      make_set(p, rng, "bg", p.background_queries, background, 0.0);
  out.in_domain = make_set(p, rng, "in", p.in_domain_queries, in_domain, 0.0);
  out.validation =
      make_set(p, rng, "va", p.validation_queries, in_domain, 0.0);
  out.closed_test =
      make_set(p, rng, "ct", p.closed_test_queries, in_domain, 0.0);
  out.open_test =
      make_set(p, rng, "ot", p.open_test_queries, open, p.open_label_noise);
  return out;
}

}  // namespace rankadapt
