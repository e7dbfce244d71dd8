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

#ifndef RANKADAPT_MODEL_IO_H_
#define RANKADAPT_MODEL_IO_H_

#include <filesystem>
#include <functional>
#include <optional>
#include <string>

#include <json.hpp>

#include "rankadapt/scorer.h"

namespace rankadapt {

// Returns a file path to write in place of an inline sub-model, or nullopt
// to inline it.
using ModelReferencer =
    std::function<std::optional<std::string>(const Scorer&)>;

// JSON model document: {"kind": "linear" | "ensemble" | "interpolated",
// "feature_count": n, ...}. Numbers use shortest round-trip decimals, so a
// reloaded model scores bit-identically.
nlohmann::json model_to_json(const Scorer& model,
                             const ModelReferencer& referencer = {});

// Sub-model references given as strings are resolved against `base_dir`.
ScorerPtr model_from_json(const nlohmann::json& doc,
                          const std::filesystem::path& base_dir = {});

void save_model(const std::filesystem::path& path, const Scorer& model,
                const ModelReferencer& referencer = {});
ScorerPtr load_model(const std::filesystem::path& path);

}  // namespace rankadapt

#endif  // RANKADAPT_MODEL_IO_H_
