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

#ifndef RANKADAPT_EXPERIMENT_H_
#define RANKADAPT_EXPERIMENT_H_

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <ostream>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "rankadapt/augment.h"
#include "rankadapt/boosting.h"
#include "rankadapt/interpolation.h"
#include "rankadapt/linear_ranker.h"
#include "rankadapt/metrics.h"
#include "rankadapt/synth.h"

namespace rankadapt {

inline const std::vector<std::string> kExperimentMethods = {
    "baselines",   "interpolate-2way", "interpolate-3way",
    "lambda-boost", "lambda-smart",    "lambda-smart-norand"};

struct ExperimentSpec {
  // Paths are relative to the spec file's directory.
  std::string background_train;
  std::string in_domain_train;
  std::string validation;
  std::string closed_test;
  std::string open_test;
  std::string output_dir = "results";
  std::vector<std::string> methods = kExperimentMethods;
  uint64_t seed = 0;

  NdcgConfig ndcg;
  LinearTrainConfig linear;
  PowellConfig powell;
  BoostConfig lambda_boost;
  BoostConfig lambda_smart;
  AugmentConfig augment;
  // "by-seed-query" or "singleton"; see group_by_seed_query.
  std::string augment_merge = "by-seed-query";
  // Carried through to run.json untouched.
  nlohmann::json generator;

  void validate() const;
  bool wants(const std::string& method) const;
  nlohmann::json to_json() const;
  static ExperimentSpec from_json(const nlohmann::json& doc);
};

ExperimentSpec read_experiment_spec(const std::filesystem::path& path);

struct ModelRow {
  std::string name;
  MetricsReport closed;
  MetricsReport open;
};

struct ExperimentOutcome {
  std::vector<ModelRow> rows;  // table order
  std::size_t augmented_documents = 0;
  std::size_t augmented_queries = 0;
  std::filesystem::path output_dir;

  const ModelRow* find(const std::string& name) const;
};

// Runs every requested method and writes closed.tsv, open.tsv, run.json and
// models/ under the output directory. Progress lines go to log. Errors are
// rethrown with the failing stage's name prefixed.
ExperimentOutcome run_experiment(
    const ExperimentSpec& spec, const std::filesystem::path& base_dir,
    std::ostream& log,
    std::optional<std::filesystem::path> output_override = std::nullopt);

// Spec emitted next to a generated shift bundle: the five files written by
// write_shift_bundle, every method, and the method settings it was tuned with.
ExperimentSpec shift_experiment_spec(const ShiftProfile& profile,
                                     uint64_t seed);

// Generates the shift profile into `dir` (background.letor, in_domain.letor,
// validation.letor, closed_test.letor, open_test.letor, experiment.json) and
// returns the spec path.
std::filesystem::path write_shift_bundle(const std::filesystem::path& dir,
                                         const ShiftProfile& profile,
                                         uint64_t seed);

// Row names in table order.
inline constexpr const char* kRowBackground = "Back.";
inline constexpr const char* kRowInDomain = "In-domain";
inline constexpr const char* kRowInterp2 = "Interp-2way";
inline constexpr const char* kRowInterp3 = "Interp-3way";
inline constexpr const char* kRowBoost = "LambdaBoost";
inline constexpr const char* kRowSmart = "LambdaSMART";
inline constexpr const char* kRowSmartNorand = "LambdaSMART-norand";

}  // namespace rankadapt

#endif  // RANKADAPT_EXPERIMENT_H_
