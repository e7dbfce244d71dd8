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

#ifndef RANKADAPT_SCORER_H_
#define RANKADAPT_SCORER_H_

#include <cstddef>
#include <memory>
#include <span>
#include <string>
#include <vector>

#include "rankadapt/dataset.h"

namespace rankadapt {

// A ranking function Score(q, d): maps a query-document feature vector to a
// real relevance score. Implementations are immutable and thread-safe.
class Scorer {
 public:
  virtual ~Scorer() = default;

  virtual std::size_t feature_count() const = 0;

  // Throws InvalidInput when features.size() != feature_count().
  virtual double score(std::span<const double> features) const = 0;
};

using ScorerPtr = std::shared_ptr<const Scorer>;

// Scores laid out like the dataset: one vector per query, one entry per
// document.
using QueryScores = std::vector<std::vector<double>>;

QueryScores score_dataset(const Scorer& scorer, const Dataset& dataset);

void check_dimension(std::size_t expected, std::size_t actual,
                     const char* who);

}  // namespace rankadapt

#endif  // RANKADAPT_SCORER_H_
