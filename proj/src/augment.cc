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

#include "rankadapt/augment.h"

#include <algorithm>
#include <array>
#include <cmath>
#include <numeric>
#include <string>
#include <unordered_map>
#include <vector>

#include "rankadapt/error.h"

namespace rankadapt {
namespace {

double squared_norm(std::span<const double> v) {
  double s = 0.0;
  for (double x : v) s += x * x;
  return s;
}

}  // namespace

void AugmentConfig::validate() const {
  if (neighbors < 1) throw InvalidInput("k must be >= 1");
  if (!(max_distance >= 0.0 && max_distance <= 2.0)) {
    throw InvalidInput("epsilon must be in [0, 2]");
  }
}

double label_entropy(const Query& query) {
  std::array<std::size_t, kMaxLabel + 1> counts{};
  for (const auto& d : query.documents) ++counts[d.label];
  const double n = static_cast<double>(query.size());
  double h = 0.0;
  for (auto c : counts) {
    if (c == 0) continue;
    const double p = static_cast<double>(c) / n;
    h -= p * std::log2(p);
  }
  return h;
}

Dataset select_seed_queries(const Dataset& in_domain,
                            const AugmentConfig& config) {
  const std::size_t n = in_domain.query_count();
  const std::size_t count =
      config.seed_query_count == 0 ? n : config.seed_query_count;
  if (count > n) {
    throw InvalidInput("seed query count " + std::to_string(count) +
                       " exceeds the " + std::to_string(n) +
                       " available queries");
  }
  std::vector<double> entropy(n);
  for (std::size_t i = 0; i < n; ++i) {
    entropy[i] = label_entropy(in_domain.query(i));
  }
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    if (entropy[a] != entropy[b]) return entropy[a] < entropy[b];
    return in_domain.query(a).qid < in_domain.query(b).qid;
  });
  std::vector<Query> picked;
  for (std::size_t i = 0; i < count; ++i) {
    picked.push_back(in_domain.query(order[i]));
  }
  return Dataset::make(std::move(picked), in_domain.feature_count(),
                       in_domain.feature_names());
}

double cosine_similarity(std::span<const double> a, std::span<const double> b) {
  if (a.size() != b.size()) throw InvalidInput("cosine: dimension mismatch");
  const double na = squared_norm(a);
  const double nb = squared_norm(b);
  if (na == 0.0 || nb == 0.0) throw InvalidInput("undefined cosine");
  double dot = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) dot += a[i] * b[i];
  // sqrt(na * nb) rather than sqrt(na) * sqrt(nb): identical vectors then
  // give exactly 1.
  return std::clamp(dot / std::sqrt(na * nb), -1.0, 1.0);
}

ExpansionResult knn_expand(const Dataset& seeds, const Dataset& background,
                           const AugmentConfig& config) {
  config.validate();
  if (seeds.feature_count() != background.feature_count()) {
    throw InvalidInput("seed and background feature counts differ");
  }
  struct SeedDoc {
    std::span<const double> features;
    int label;
    const std::string* qid;
  };
  std::vector<SeedDoc> pool;
  for (const auto& q : seeds.queries()) {
    for (const auto& d : q.documents) {
      if (squared_norm(d.features) > 0.0) {
        pool.push_back({d.features, d.label, &q.qid});
      }
    }
  }
  if (pool.empty()) throw InvalidInput("no usable seed documents");
  if (pool.size() < config.neighbors) {
    throw InvalidInput("k = " + std::to_string(config.neighbors) +
                       " exceeds the " + std::to_string(pool.size()) +
                       " seed documents");
  }

  ExpansionResult result;
  std::vector<Query> accepted;
  std::vector<std::pair<double, std::size_t>> dist(pool.size());
  for (const auto& q : background.queries()) {
    for (std::size_t di = 0; di < q.size(); ++di) {
      const auto& doc = q.documents[di];
      ++result.scanned;
      if (squared_norm(doc.features) == 0.0) {
        ++result.skipped_zero;
        continue;
      }
      for (std::size_t s = 0; s < pool.size(); ++s) {
        dist[s] = {1.0 - cosine_similarity(doc.features, pool[s].features), s};
      }
      std::partial_sort(dist.begin(), dist.begin() + config.neighbors,
                        dist.end());
      bool within = true;
      bool label_match = false;
      for (std::size_t k = 0; k < config.neighbors; ++k) {
        within = within && dist[k].first <= config.max_distance;
        label_match = label_match || pool[dist[k].second].label == doc.label;
      }
      if (within && label_match) {
        accepted.push_back(
            Query{"aug-" + q.qid + "-" + std::to_string(di), {doc}});
        result.nearest_seed_qid.push_back(*pool[dist[0].second].qid);
      }
    }
  }
  result.expanded = Dataset::make(std::move(accepted),
                                  background.feature_count());
  return result;
}

Dataset group_by_seed_query(const ExpansionResult& expansion) {
  std::vector<Query> groups;
  std::unordered_map<std::string, std::size_t> index;
  const auto& singles = expansion.expanded;
  for (std::size_t i = 0; i < singles.query_count(); ++i) {
    const auto& seed_qid = expansion.nearest_seed_qid.at(i);
    auto [it, inserted] = index.try_emplace(seed_qid, groups.size());
    if (inserted) groups.push_back(Query{"aug-" + seed_qid, {}});
    for (const auto& d : singles.query(i).documents) {
      groups[it->second].documents.push_back(d);
    }
  }
  return Dataset::make(std::move(groups), singles.feature_count());
}

}  // namespace rankadapt
