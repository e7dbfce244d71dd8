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

// Synthetic datasets shared by the unit and acceptance tests.

#ifndef RANKADAPT_TESTS_FIXTURES_H_
#define RANKADAPT_TESTS_FIXTURES_H_

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>
#include <vector>

#include "rankadapt/dataset.h"
#include "rankadapt/metrics.h"
#include "rankadapt/random.h"

namespace rankadapt::testing {

inline Query make_query(std::string qid, const std::vector<int>& labels,
                        std::size_t feature_count = 1) {
  Query q{std::move(qid), {}};
  for (int l : labels) {
    q.documents.push_back(Document{l, std::vector<double>(feature_count, 0.0)});
  }
  return q;
}

// Query with n in [2, max_docs] documents, uniform labels 0..4 and uniform
// features in [0, 1).
inline Query random_query(Rng& rng, std::size_t max_docs,
                          std::size_t feature_count, std::string qid) {
  const std::size_t n = 2 + rng.below(max_docs - 1);
  Query q{std::move(qid), {}};
  for (std::size_t i = 0; i < n; ++i) {
    Document d{static_cast<int>(rng.below(5)), {}};
    for (std::size_t f = 0; f < feature_count; ++f) {
      d.features.push_back(rng.uniform());
    }
    q.documents.push_back(std::move(d));
  }
  return q;
}

inline std::vector<double> random_scores(Rng& rng, std::size_t n) {
  std::vector<double> s(n);
  for (auto& v : s) v = rng.normal();
  return s;
}

inline Dataset random_dataset(uint64_t seed, std::size_t queries,
                              std::size_t max_docs,
                              std::size_t feature_count) {
  Rng rng(seed);
  std::vector<Query> qs;
  for (std::size_t i = 0; i < queries; ++i) {
    qs.push_back(random_query(rng, max_docs, feature_count,
                              "q" + std::to_string(i)));
  }
  return Dataset::make(std::move(qs), feature_count);
}

// Feature 0 equals the label; the remaining features are uniform noise.
inline Dataset label_feature_fixture(uint64_t seed, std::size_t queries = 20,
                                     std::size_t docs = 10,
                                     std::size_t feature_count = 5) {
  Rng rng(seed);
  std::vector<Query> qs;
  for (std::size_t i = 0; i < queries; ++i) {
    Query q{"q" + std::to_string(i), {}};
    for (std::size_t j = 0; j < docs; ++j) {
      const int label = static_cast<int>(rng.below(5));
      Document d{label, {static_cast<double>(label)}};
      for (std::size_t f = 1; f < feature_count; ++f) {
        d.features.push_back(rng.uniform());
      }
      q.documents.push_back(std::move(d));
    }
    qs.push_back(std::move(q));
  }
  return Dataset::make(std::move(qs), feature_count);
}

// label = 1 if feature 0 > 0.5 else 0; features uniform in [0, 1).
inline Dataset threshold_fixture(uint64_t seed, std::size_t queries = 40,
                                 std::size_t docs = 10,
                                 std::size_t feature_count = 5) {
  Rng rng(seed);
  std::vector<Query> qs;
  for (std::size_t i = 0; i < queries; ++i) {
    Query q{"q" + std::to_string(i), {}};
    for (std::size_t j = 0; j < docs; ++j) {
      Document d{0, {}};
      for (std::size_t f = 0; f < feature_count; ++f) {
        d.features.push_back(rng.uniform());
      }
      d.label = d.features[0] > 0.5 ? 1 : 0;
      q.documents.push_back(std::move(d));
    }
    qs.push_back(std::move(q));
  }
  return Dataset::make(std::move(qs), feature_count);
}

// Straightforward NDCG@k used as an oracle: explicit sort by (score desc,
// index asc), textbook DCG loop. Shares no code with the metrics module.
inline double reference_ndcg(const std::vector<int>& labels,
                             const std::vector<double>& scores, int k) {
  const std::size_t n = labels.size();
  std::vector<std::size_t> idx(n);
  std::iota(idx.begin(), idx.end(), std::size_t{0});
  std::sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) {
    if (scores[a] != scores[b]) return scores[a] > scores[b];
    return a < b;
  });
  std::vector<int> ideal = labels;
  std::sort(ideal.rbegin(), ideal.rend());
  double dcg = 0.0;
  double idcg = 0.0;
  for (std::size_t j = 1; j <= n && j <= static_cast<std::size_t>(k); ++j) {
    dcg += (std::pow(2.0, labels[idx[j - 1]]) - 1.0) / std::log(1.0 + j);
    idcg += (std::pow(2.0, ideal[j - 1]) - 1.0) / std::log(1.0 + j);
  }
  return dcg / idcg;
}

// NDCG after explicitly exchanging the rank positions of i and j.
inline double reference_swapped_ndcg(const std::vector<int>& labels,
                                     const std::vector<double>& scores,
                                     std::size_t i, std::size_t j, int k) {
  const std::size_t n = labels.size();
  std::vector<std::size_t> idx(n);
  std::iota(idx.begin(), idx.end(), std::size_t{0});
  std::sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) {
    if (scores[a] != scores[b]) return scores[a] > scores[b];
    return a < b;
  });
  auto pi = std::find(idx.begin(), idx.end(), i);
  auto pj = std::find(idx.begin(), idx.end(), j);
  std::iter_swap(pi, pj);
  // Re-express the permuted order as strictly decreasing scores.
  std::vector<double> permuted(n);
  for (std::size_t r = 0; r < n; ++r) {
    permuted[idx[r]] = static_cast<double>(n - r);
  }
  return reference_ndcg(labels, permuted, k);
}

// Hand-placed kNN fixture: 2-d points on the unit circle (angles in
// degrees), so cosine distance is 1 - cos(angle difference).
inline std::vector<double> at_angle(double degrees, double norm = 1.0) {
  const double r = degrees * 3.14159265358979323846 / 180.0;
  return {norm * std::cos(r), norm * std::sin(r)};
}

struct KnnFixture {
  Dataset seeds;       // 5 documents
  Dataset background;  // 6 documents
};

inline KnnFixture knn_fixture() {
  Query s1{"s1", {{2, at_angle(0)}, {2, at_angle(2)}, {3, at_angle(4)}}};
  Query s2{"s2", {{0, at_angle(90)}, {1, at_angle(92)}}};
  Query b1{"b1",
           {{2, at_angle(2)},     // near the first cluster, label matches
            {4, at_angle(3)},     // near, but no neighbor labeled 4
            {2, at_angle(45)}}};  // far from everything
  Query b2{"b2",
           {{0, at_angle(91)},        // third neighbor is 87 degrees away
            {3, at_angle(3)},         // matches the label-3 seed
            {2, at_angle(1, 5.0)}}};  // cosine ignores the norm
  return {Dataset::make({s1, s2}, 2), Dataset::make({b1, b2}, 2)};
}

// Accepted background documents as (qid, index) computed from a full
// distance matrix with its own cosine arithmetic.
inline std::vector<std::pair<std::string, std::size_t>> brute_force_accept(
    const Dataset& seeds, const Dataset& background, std::size_t k,
    double epsilon) {
  std::vector<const Document*> pool;
  for (const auto& q : seeds.queries()) {
    for (const auto& d : q.documents) pool.push_back(&d);
  }
  auto norm = [](const std::vector<double>& v) {
    double s = 0.0;
    for (double x : v) s += x * x;
    return std::sqrt(s);
  };
  std::vector<std::pair<std::string, std::size_t>> out;
  for (const auto& q : background.queries()) {
    for (std::size_t i = 0; i < q.size(); ++i) {
      const auto& x = q.documents[i].features;
      std::vector<std::pair<double, std::size_t>> row;
      for (std::size_t s = 0; s < pool.size(); ++s) {
        double dot = 0.0;
        for (std::size_t f = 0; f < x.size(); ++f) {
          dot += x[f] * pool[s]->features[f];
        }
        row.push_back({1.0 - dot / (norm(x) * norm(pool[s]->features)), s});
      }
      std::sort(row.begin(), row.end());
      bool ok = true, match = false;
      for (std::size_t j = 0; j < k; ++j) {
        ok = ok && row[j].first <= epsilon;
        match = match || pool[row[j].second]->label == q.documents[i].label;
      }
      if (ok && match) out.push_back({q.qid, i});
    }
  }
  return out;
}

}  // namespace rankadapt::testing

#endif  // RANKADAPT_TESTS_FIXTURES_H_
