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

#include "rankadapt/scorer.h"

#include "rankadapt/error.h"

namespace rankadapt {

void check_dimension(std::size_t expected, std::size_t actual,
                     const char* who) {
  if (expected != actual) {
    throw InvalidInput(std::string(who) + ": expected " +
                       std::to_string(expected) + " features, got " +
                       std::to_string(actual));
  }
}

QueryScores score_dataset(const Scorer& scorer, const Dataset& dataset) {
  check_dimension(scorer.feature_count(), dataset.feature_count(),
                  "score_dataset");
  QueryScores out;
  out.reserve(dataset.query_count());
  for (const auto& q : dataset.queries()) {
    std::vector<double> s;
    s.reserve(q.size());
    for (const auto& d : q.documents) s.push_back(scorer.score(d.features));
    out.push_back(std::move(s));
  }
  return out;
}

}  // namespace rankadapt
