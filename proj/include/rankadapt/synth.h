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

#ifndef RANKADAPT_SYNTH_H_
#define RANKADAPT_SYNTH_H_

#include <cstddef>
#include <cstdint>
#include <vector>

#include <json.hpp>

#include "rankadapt/dataset.h"

namespace rankadapt {

// Seed of the shipped shift experiment; `synth` uses it unless told otherwise.
inline constexpr uint64_t kBundledShiftSeed = 7;

// Parameters of the "shift" profile. Relevance is a latent score
// z = w.x + interaction(x) + query offset + noise, cut into grades 0..4 at
// fixed quantiles of z over the generated set.
struct ShiftProfile {
  std::size_t feature_count = 10;
  std::size_t docs_per_query = 20;
  std::size_t background_queries = 300;
  std::size_t in_domain_queries = 60;
  std::size_t validation_queries = 40;
  std::size_t closed_test_queries = 100;
  std::size_t open_test_queries = 100;

  // In-domain weights are w_in = mix * w_bg + (1 - mix) * w_own.
  double in_domain_mix = 0.4;
  // Open-test weights drift back: w_open = drift * w_bg + (1 - drift) * w_in.
  double open_drift = 0.5;
  // Strength of the in-domain interaction term; absent from the open set.
  double interaction = 2.0;
  double noise_sd = 0.3;
  double query_offset_sd = 0.3;
  // Probability an open-test label is replaced by a uniform grade.
  double open_label_noise = 0.15;
  // Cumulative fractions at which grades 1, 2, 3, 4 start.
  std::vector<double> grade_quantiles = {0.5, 0.75, 0.9, 0.97};

  void validate() const;
  nlohmann::json to_json() const;
  static ShiftProfile from_json(const nlohmann::json& doc);
};

struct ShiftData {
  Dataset background;
  Dataset in_domain;
  Dataset validation;
  Dataset closed_test;
  Dataset open_test;
};

ShiftData generate_shift(const ShiftProfile& profile, uint64_t seed);

}  // namespace rankadapt

#endif  // RANKADAPT_SYNTH_H_
