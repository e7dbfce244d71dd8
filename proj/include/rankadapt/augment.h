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

#ifndef RANKADAPT_AUGMENT_H_
#define RANKADAPT_AUGMENT_H_

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "rankadapt/dataset.h"

namespace rankadapt {

struct AugmentConfig {
  // Number of low-entropy in-domain queries kept as seeds; 0 keeps all.
  std::size_t seed_query_count = 0;
  std::size_t neighbors = 3;
  // Cosine distance (1 - similarity) every neighbor must be within.
  double max_distance = 0.05;
  uint64_t seed = 0;

  void validate() const;
};

// Shannon entropy (bits) of the query's label distribution.
double label_entropy(const Query& query);

// The `seed_query_count` queries with the lowest label entropy, ties broken
// by qid, in that order.
Dataset select_seed_queries(const Dataset& in_domain,
                            const AugmentConfig& config);

// Throws InvalidInput("undefined cosine") for a zero vector.
double cosine_similarity(std::span<const double> a, std::span<const double> b);

struct ExpansionResult {
  // Accepted background documents, each in its own query
  // `aug-<qid>-<document index>`, in background scan order.
  Dataset expanded;
  // Per accepted document: qid of the seed query holding its nearest
  // neighbor.
  std::vector<std::string> nearest_seed_qid;
  std::size_t scanned = 0;
  // Background documents with an all-zero feature vector (no cosine).
  std::size_t skipped_zero = 0;
};

// Keeps a background document when its k nearest seed documents (by cosine
// distance, ties in seed order) are all within max_distance and at least
// one of them carries the same label. Zero-vector seed documents are left
// out of the neighbor pool.
ExpansionResult knn_expand(const Dataset& seeds, const Dataset& background,
                           const AugmentConfig& config);

// Regroups the accepted singleton queries by nearest seed query, one query
// `aug-<seed qid>` per seed query that attracted documents, so pairwise
// training sees pairs among them. Documents keep background scan order
// inside each group; groups follow first appearance.
Dataset group_by_seed_query(const ExpansionResult& expansion);

}  // namespace rankadapt

#endif  // RANKADAPT_AUGMENT_H_
