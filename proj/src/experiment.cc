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

#include "rankadapt/experiment.h"

#include <algorithm>
#include <fstream>
#include <map>
#include <memory>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "rankadapt/error.h"
#include "rankadapt/model_io.h"
#include "rankadapt/version.h"

namespace rankadapt {
namespace {

using nlohmann::json;
namespace fs = std::filesystem;

void reject_unknown(const json& obj, const std::set<std::string>& known,
                    const std::string& where) {
  if (!obj.is_object()) throw InvalidInput(where + " must be an object");
  for (const auto& [key, value] : obj.items()) {
    if (!known.contains(key)) {
      throw InvalidInput("unknown key '" + key + "' in " + where);
    }
  }
}

template <typename T>
void get(const json& obj, const char* key, T& field) {
  if (obj.contains(key)) obj.at(key).get_to(field);
}

json ndcg_json(const NdcgConfig& c) {
  return {{"truncation", c.truncation},
          {"ave_first", c.ave_first},
          {"ave_last", c.ave_last}};
}

json linear_json(const LinearTrainConfig& c) {
  return {{"epochs", c.epochs},
          {"learning_rate", c.learning_rate},
          {"shuffle", c.shuffle}};
}

json powell_json(const PowellConfig& c) {
  return {{"max_iterations", c.max_iterations},
          {"line_search_grid", c.line_search_grid},
          {"line_search_span", c.line_search_span},
          {"refine_levels", c.refine_levels},
          {"tolerance", c.tolerance}};
}

json boost_json(const BoostConfig& c, bool trees) {
  json j = {{"rounds", c.rounds}, {"shrinkage", c.shrinkage}};
  if (trees) {
    j["leaves"] = c.leaves;
    j["min_samples_per_leaf"] = c.min_samples_per_leaf;
    j["randomize"] = c.randomize;
    j["sample_rate"] = c.sample_rate;
    j["max_step"] = c.max_step;
  }
  return j;
}

BoostConfig boost_from(const json& j, bool trees, const std::string& where) {
  BoostConfig c;
  if (trees) {
    reject_unknown(j, {"rounds", "shrinkage", "leaves", "min_samples_per_leaf",
                       "randomize", "sample_rate", "max_step"},
                   where);
    get(j, "leaves", c.leaves);
    get(j, "min_samples_per_leaf", c.min_samples_per_leaf);
    get(j, "randomize", c.randomize);
    get(j, "sample_rate", c.sample_rate);
    get(j, "max_step", c.max_step);
  } else {
    reject_unknown(j, {"rounds", "shrinkage"}, where);
  }
  get(j, "rounds", c.rounds);
  get(j, "shrinkage", c.shrinkage);
  return c;
}

// Fixed offsets keep every stage's stream independent of which other
// methods were requested.
enum SeedSlot : uint64_t {
  kSeedBackground = 1,
  kSeedInDomain,
  kSeedPowell2,
  kSeedAugment,
  kSeedAugmented,
  kSeedPowell3,
  kSeedBoost,
  kSeedSmart,
  kSeedSmartNorand,
};

uint64_t derive(uint64_t seed, SeedSlot slot) {
  return seed * 1000003ULL + static_cast<uint64_t>(slot);
}

template <typename F>
auto stage(const std::string& name, std::ostream& log, F&& body) {
  log << "stage " << name << '\n';
  try {
    return body();
  } catch (const InvalidInput& e) {
    throw InvalidInput("stage " + name + ": " + e.what());
  } catch (const Degenerate& e) {
    throw Degenerate("stage " + name + ": " + e.what());
  } catch (const std::exception& e) {
    throw Error("stage " + name + ": " + e.what());
  }
}

void write_text(const fs::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw InvalidInput("cannot write '" + path.string() + "'");
  out << text;
  if (!out) throw InvalidInput("cannot write '" + path.string() + "'");
}

json dataset_summary(const Dataset& d) {
  return {{"queries", d.query_count()},
          {"documents", d.document_count()},
          {"features", d.feature_count()}};
}

}  // namespace

void ExperimentSpec::validate() const {
  for (const auto* f : {&background_train, &in_domain_train, &validation,
                        &closed_test, &open_test}) {
    if (f->empty()) throw InvalidInput("experiment spec is missing a data file");
  }
  if (methods.empty()) throw InvalidInput("experiment spec lists no methods");
  for (const auto& m : methods) {
    if (std::find(kExperimentMethods.begin(), kExperimentMethods.end(), m) ==
        kExperimentMethods.end()) {
      throw InvalidInput("unknown method '" + m + "'");
    }
  }
  if (augment_merge != "by-seed-query" && augment_merge != "singleton") {
    throw InvalidInput("augment merge must be by-seed-query or singleton");
  }
  ndcg.validate();
  linear.validate();
  powell.validate();
  lambda_boost.validate();
  lambda_smart.validate();
  augment.validate();
}

bool ExperimentSpec::wants(const std::string& method) const {
  return std::find(methods.begin(), methods.end(), method) != methods.end();
}

json ExperimentSpec::to_json() const {
  json aug = {{"seed_query_count", augment.seed_query_count},
              {"neighbors", augment.neighbors},
              {"max_distance", augment.max_distance},
              {"merge", augment_merge}};
  json j = {{"background_train", background_train},
            {"in_domain_train", in_domain_train},
            {"validation", validation},
            {"closed_test", closed_test},
            {"open_test", open_test},
            {"output_dir", output_dir},
            {"methods", methods},
            {"seed", seed},
            {"ndcg", ndcg_json(ndcg)},
            {"linear", linear_json(linear)},
            {"powell", powell_json(powell)},
            {"lambda_boost", boost_json(lambda_boost, false)},
            {"lambda_smart", boost_json(lambda_smart, true)},
            {"augment", aug}};
  if (!generator.is_null()) j["generator"] = generator;
  return j;
}

ExperimentSpec ExperimentSpec::from_json(const json& doc) {
  reject_unknown(doc,
                 {"background_train", "in_domain_train", "validation",
                  "closed_test", "open_test", "output_dir", "methods", "method",
                  "seed", "ndcg", "linear", "powell", "lambda_boost",
                  "lambda_smart", "augment", "generator"},
                 "experiment spec");
  ExperimentSpec s;
  get(doc, "background_train", s.background_train);
  get(doc, "in_domain_train", s.in_domain_train);
  get(doc, "validation", s.validation);
  get(doc, "closed_test", s.closed_test);
  get(doc, "open_test", s.open_test);
  get(doc, "output_dir", s.output_dir);
  get(doc, "seed", s.seed);
  if (doc.contains("methods")) {
    doc.at("methods").get_to(s.methods);
  } else if (doc.contains("method")) {
    s.methods = {doc.at("method").get<std::string>()};
  }
  if (doc.contains("ndcg")) {
    const auto& j = doc.at("ndcg");
    reject_unknown(j, {"truncation", "ave_first", "ave_last"}, "ndcg");
    get(j, "truncation", s.ndcg.truncation);
    get(j, "ave_first", s.ndcg.ave_first);
    get(j, "ave_last", s.ndcg.ave_last);
  }
  if (doc.contains("linear")) {
    const auto& j = doc.at("linear");
    reject_unknown(j, {"epochs", "learning_rate", "shuffle"}, "linear");
    get(j, "epochs", s.linear.epochs);
    get(j, "learning_rate", s.linear.learning_rate);
    get(j, "shuffle", s.linear.shuffle);
  }
  if (doc.contains("powell")) {
    const auto& j = doc.at("powell");
    reject_unknown(j, {"max_iterations", "line_search_grid",
                       "line_search_span", "refine_levels", "tolerance"},
                   "powell");
    get(j, "max_iterations", s.powell.max_iterations);
    get(j, "line_search_grid", s.powell.line_search_grid);
    get(j, "line_search_span", s.powell.line_search_span);
    get(j, "refine_levels", s.powell.refine_levels);
    get(j, "tolerance", s.powell.tolerance);
  }
  if (doc.contains("lambda_boost")) {
    s.lambda_boost = boost_from(doc.at("lambda_boost"), false, "lambda_boost");
  }
  if (doc.contains("lambda_smart")) {
    s.lambda_smart = boost_from(doc.at("lambda_smart"), true, "lambda_smart");
  }
  if (doc.contains("augment")) {
    const auto& j = doc.at("augment");
    reject_unknown(j, {"seed_query_count", "neighbors", "max_distance",
                       "merge"},
                   "augment");
    get(j, "seed_query_count", s.augment.seed_query_count);
    get(j, "neighbors", s.augment.neighbors);
    get(j, "max_distance", s.augment.max_distance);
    get(j, "merge", s.augment_merge);
  }
  if (doc.contains("generator")) s.generator = doc.at("generator");
  s.validate();
  return s;
}

ExperimentSpec read_experiment_spec(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw InvalidInput("cannot open '" + path.string() + "'");
  try {
    return ExperimentSpec::from_json(json::parse(in));
  } catch (const json::exception& e) {
    throw InvalidInput("malformed experiment spec '" + path.string() +
                       "': " + e.what());
  } catch (const InvalidInput& e) {
    throw InvalidInput("experiment spec '" + path.string() + "': " + e.what());
  }
}

const ModelRow* ExperimentOutcome::find(const std::string& name) const {
  for (const auto& r : rows) {
    if (r.name == name) return &r;
  }
  return nullptr;
}

ExperimentOutcome run_experiment(const ExperimentSpec& spec,
                                 const fs::path& base_dir, std::ostream& log,
                                 std::optional<fs::path> output_override) {
  spec.validate();
  const auto& ndcg = spec.ndcg;

  struct Named {
    std::string path;
    Dataset data;
  };
  auto data = stage("load", log, [&] {
    std::vector<Named> sets;
    for (const auto* f : {&spec.background_train, &spec.in_domain_train,
                          &spec.validation, &spec.closed_test,
                          &spec.open_test}) {
      sets.push_back({*f, read_letor_file((base_dir / *f).string())});
    }
    for (std::size_t i = 1; i < sets.size(); ++i) {
      if (sets[i].data.feature_count() != sets[0].data.feature_count()) {
        throw InvalidInput(
            "feature count mismatch: '" + sets[0].path + "' has " +
            std::to_string(sets[0].data.feature_count()) +
            " features but '" + sets[i].path + "' has " +
            std::to_string(sets[i].data.feature_count()));
      }
    }
    return sets;
  });
  const Dataset& background = data[0].data;
  const Dataset& in_domain = data[1].data;
  const Dataset& validation = data[2].data;
  const Dataset& closed = data[3].data;
  const Dataset& open = data[4].data;

  ExperimentOutcome outcome;
  outcome.output_dir =
      output_override ? *output_override : base_dir / spec.output_dir;
  const fs::path models_dir = outcome.output_dir / "models";
  std::error_code ec;
  fs::create_directories(models_dir, ec);
  if (ec) {
    throw InvalidInput("cannot create '" + models_dir.string() +
                       "': " + ec.message());
  }

  json seeds = {{"master", spec.seed}};
  json manifest_models = json::object();
  std::map<const Scorer*, std::string> files;
  auto referencer = [&](const Scorer& m) -> std::optional<std::string> {
    auto it = files.find(&m);
    if (it == files.end()) return std::nullopt;
    return it->second;
  };
  auto persist = [&](const ScorerPtr& model, const std::string& file) {
    save_model(models_dir / file, *model, referencer);
    files[model.get()] = file;
  };

  std::vector<std::pair<std::string, ScorerPtr>> rows;

  auto train_linear = [&](const Dataset& d, SeedSlot slot,
                          const char* key) -> ScorerPtr {
    auto cfg = spec.linear;
    cfg.ndcg = ndcg;
    cfg.seed = derive(spec.seed, slot);
    seeds[key] = cfg.seed;
    return std::make_shared<LinearModel>(train_linear_lambdarank(d, cfg));
  };

  ScorerPtr back = stage("train-background", log, [&] {
    return train_linear(background, kSeedBackground, "background");
  });
  persist(back, "background.json");
  ScorerPtr indomain = stage("train-in-domain", log, [&] {
    return train_linear(in_domain, kSeedInDomain, "in_domain");
  });
  persist(indomain, "in_domain.json");
  if (spec.wants("baselines")) {
    rows.emplace_back(kRowBackground, back);
    rows.emplace_back(kRowInDomain, indomain);
  }

  auto interpolate = [&](std::vector<ScorerPtr> parts, SeedSlot slot,
                         const char* key) -> ScorerPtr {
    auto cfg = spec.powell;
    cfg.seed = derive(spec.seed, slot);
    seeds[key] = cfg.seed;
    auto result = optimize_weights_powell(parts, validation, ndcg, cfg);
    manifest_models[key] = {{"alphas", result.alphas},
                            {"validation_ave_ndcg", result.objective},
                            {"initial_ave_ndcg", result.initial_objective},
                            {"iterations", result.iterations}};
    log << "  alphas";
    for (double a : result.alphas) log << ' ' << format_double(a);
    log << "  validation Ave-NDCG " << format_double(result.objective) << '\n';
    return std::make_shared<InterpolatedModel>(std::move(parts),
                                               result.alphas);
  };

  if (spec.wants("interpolate-2way")) {
    auto m = stage("interpolate-2way", log, [&] {
      return interpolate({back, indomain}, kSeedPowell2, "interpolate_2way");
    });
    persist(m, "interpolate_2way.json");
    rows.emplace_back(kRowInterp2, m);
  }

  if (spec.wants("interpolate-3way")) {
    auto third = stage("augment", log, [&] {
      auto cfg = spec.augment;
      cfg.seed = derive(spec.seed, kSeedAugment);
      seeds["augment"] = cfg.seed;
      auto seeds_ds = select_seed_queries(in_domain, cfg);
      auto expansion = knn_expand(seeds_ds, background, cfg);
      write_letor_file((outcome.output_dir / "augmented.letor").string(),
                       expansion.expanded);
      Dataset extra = spec.augment_merge == "singleton"
                          ? expansion.expanded
                          : group_by_seed_query(expansion);
      outcome.augmented_documents = expansion.expanded.document_count();
      outcome.augmented_queries = extra.query_count();
      manifest_models["augment"] = {
          {"seed_queries", seeds_ds.query_count()},
          {"scanned", expansion.scanned},
          {"skipped_zero", expansion.skipped_zero},
          {"accepted_documents", outcome.augmented_documents},
          {"training_queries", outcome.augmented_queries}};
      log << "  accepted " << expansion.expanded.document_count() << " of "
          << expansion.scanned << " background documents\n";
      std::vector<Dataset> parts = {in_domain};
      if (!extra.empty()) parts.push_back(std::move(extra));
      return train_linear(concat(parts), kSeedAugmented, "in_domain_augmented");
    });
    persist(third, "in_domain_augmented.json");
    auto m = stage("interpolate-3way", log, [&] {
      return interpolate({back, indomain, third}, kSeedPowell3,
                         "interpolate_3way");
    });
    persist(m, "interpolate_3way.json");
    rows.emplace_back(kRowInterp3, m);
  }

  auto boost = [&](const char* name, const char* key, const char* file,
                   BoostConfig cfg, SeedSlot slot, bool trees) {
    auto m = stage(name, log, [&]() -> ScorerPtr {
      cfg.seed = derive(spec.seed, slot);
      seeds[key] = cfg.seed;
      auto fit = trees ? lambda_smart(back, in_domain, cfg, ndcg)
                       : lambda_boost(back, in_domain, cfg, ndcg);
      return std::make_shared<BoostedEnsemble>(std::move(fit));
    });
    persist(m, file);
    return m;
  };
  if (spec.wants("lambda-boost")) {
    rows.emplace_back(kRowBoost,
                      boost("lambda-boost", "lambda_boost", "lambda_boost.json",
                            spec.lambda_boost, kSeedBoost, false));
  }
  if (spec.wants("lambda-smart")) {
    rows.emplace_back(kRowSmart,
                      boost("lambda-smart", "lambda_smart", "lambda_smart.json",
                            spec.lambda_smart, kSeedSmart, true));
  }
  if (spec.wants("lambda-smart-norand")) {
    auto cfg = spec.lambda_smart;
    cfg.randomize = false;
    rows.emplace_back(
        kRowSmartNorand,
        boost("lambda-smart-norand", "lambda_smart_norand",
              "lambda_smart_norand.json", cfg, kSeedSmartNorand, true));
  }

  stage("evaluate", log, [&] {
    for (const auto& [name, model] : rows) {
      outcome.rows.push_back({name, mean_ndcg(closed, *model, ndcg),
                              mean_ndcg(open, *model, ndcg)});
    }
    const ModelRow* base = outcome.find(kRowBackground);
    auto table = [&](bool is_open) {
      std::ostringstream out;
      write_report_header(out, base != nullptr);
      for (const auto& row : outcome.rows) {
        const auto& r = is_open ? row.open : row.closed;
        std::optional<double> p;
        if (base) {
          const auto& b = is_open ? base->open : base->closed;
          p = paired_t_test(r.per_query_ave(), b.per_query_ave()).p_value;
        }
        write_report_row(out, row.name, r, p);
      }
      return out.str();
    };
    write_text(outcome.output_dir / "closed.tsv", table(false));
    write_text(outcome.output_dir / "open.tsv", table(true));
    return 0;
  });

  json manifest = {
      {"version", std::string("rankadapt ") + kVersion},
      {"spec", spec.to_json()},
      {"seeds", seeds},
      {"datasets",
       {{"background_train", dataset_summary(background)},
        {"in_domain_train", dataset_summary(in_domain)},
        {"validation", dataset_summary(validation)},
        {"closed_test", dataset_summary(closed)},
        {"open_test", dataset_summary(open)}}},
      {"models", manifest_models},
      {"tables", {"closed.tsv", "open.tsv"}},
  };
  write_text(outcome.output_dir / "run.json", manifest.dump(2) + "\n");
  return outcome;
}

ExperimentSpec shift_experiment_spec(const ShiftProfile& profile,
                                     uint64_t seed) {
  ExperimentSpec s;
  s.background_train = "background.letor";
  s.in_domain_train = "in_domain.letor";
  s.validation = "validation.letor";
  s.closed_test = "closed_test.letor";
  s.open_test = "open_test.letor";
  s.seed = seed;
  s.linear.epochs = 30;
  s.linear.learning_rate = 1e-2;
  s.lambda_boost.rounds = 500;
  s.lambda_smart.rounds = 500;
  s.lambda_smart.leaves = 20;
  s.lambda_smart.max_step = 5.0;
  s.lambda_smart.randomize = true;
  s.lambda_smart.sample_rate = 0.7;
  s.augment.seed_query_count = 0;
  s.augment.neighbors = 3;
  s.augment.max_distance = 0.05;
  s.generator = profile.to_json();
  s.generator["seed"] = seed;
  return s;
}

fs::path write_shift_bundle(const fs::path& dir, const ShiftProfile& profile,
                            uint64_t seed) {
  auto data = generate_shift(profile, seed);
  auto spec = shift_experiment_spec(profile, seed);
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) {
    throw InvalidInput("cannot create '" + dir.string() + "': " + ec.message());
  }
  write_letor_file((dir / spec.background_train).string(), data.background);
  write_letor_file((dir / spec.in_domain_train).string(), data.in_domain);
  write_letor_file((dir / spec.validation).string(), data.validation);
  write_letor_file((dir / spec.closed_test).string(), data.closed_test);
  write_letor_file((dir / spec.open_test).string(), data.open_test);
  const auto path = dir / "experiment.json";
  write_text(path, spec.to_json().dump(2) + "\n");
  return path;
}

}  // namespace rankadapt
