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

#include "rankadapt/cli.h"

#include <cstdio>
#include <filesystem>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "rankadapt/augment.h"
#include "rankadapt/boosting.h"
#include "rankadapt/error.h"
#include "rankadapt/experiment.h"
#include "rankadapt/interpolation.h"
#include "rankadapt/linear_ranker.h"
#include "rankadapt/metrics.h"
#include "rankadapt/model_io.h"
#include "rankadapt/synth.h"
#include "rankadapt/version.h"

namespace rankadapt {
namespace {

namespace fs = std::filesystem;

std::string fixed(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.6f", v);
  return buf;
}

// Train Ave-NDCG for the final report line; n/a when no query has a
// relevant document.
std::string train_ave(const Dataset& ds, const Scorer& model,
                      const NdcgConfig& ndcg) {
  try {
    return fixed(mean_ndcg(ds, model, ndcg).ave_ndcg);
  } catch (const Degenerate&) {
    return "n/a";
  }
}

// Path of `target` as seen from the directory holding `from_file`.
std::string reference_path(const fs::path& target, const fs::path& from_file) {
  auto dir = fs::absolute(from_file).parent_path();
  return fs::absolute(target).lexically_normal().lexically_relative(dir)
      .generic_string();
}

void check_features(std::size_t model, std::size_t data,
                    const std::string& what) {
  if (model != data) {
    throw InvalidInput("feature count mismatch: " + what + " has " +
                       std::to_string(model) + " features, data has " +
                       std::to_string(data));
  }
}

struct TrainArgs {
  std::string data, out;
  int epochs = 100;
  double lr = 1e-5;
  uint64_t seed = 0;
  bool no_shuffle = false;
};

int cmd_train(const TrainArgs& a, std::ostream& out) {
  LinearTrainConfig cfg;
  cfg.epochs = a.epochs;
  cfg.learning_rate = a.lr;
  cfg.seed = a.seed;
  cfg.shuffle = !a.no_shuffle;
  cfg.validate();
  auto ds = read_letor_file(a.data);
  auto model = train_linear_lambdarank(ds, cfg);
  save_model(a.out, model);
  out << "ave_ndcg=" << train_ave(ds, model, cfg.ndcg) << '\n';
  return kExitOk;
}

struct AdaptArgs {
  std::string method, background, data, out;
  bool zero_background = false;
  BoostConfig boost;
  bool trace = false;
};

int cmd_adapt(const AdaptArgs& a, std::ostream& out) {
  a.boost.validate();
  if (a.background.empty() == !a.zero_background) {
    throw InvalidInput("give exactly one of --background and --zero-background");
  }
  auto ds = read_letor_file(a.data);
  ScorerPtr background;
  if (a.zero_background) {
    background = std::make_shared<LinearModel>(
        std::vector<double>(ds.feature_count(), 0.0));
  } else {
    background = load_model(a.background);
    check_features(background->feature_count(), ds.feature_count(),
                   "background model '" + a.background + "'");
  }
  NdcgConfig ndcg;
  RoundObserver observer;
  if (a.trace) {
    observer = [&out](int round, double ave) {
      out << "round=" << round << " ave_ndcg=" << fixed(ave) << '\n';
    };
  }
  auto model = a.method == "smart"
                   ? lambda_smart(background, ds, a.boost, ndcg, observer)
                   : lambda_boost(background, ds, a.boost, ndcg, observer);
  ModelReferencer ref;
  if (!a.zero_background) {
    ref = [&](const Scorer& m) -> std::optional<std::string> {
      if (&m != background.get()) return std::nullopt;
      return reference_path(a.background, a.out);
    };
  }
  save_model(a.out, model, ref);
  out << "ave_ndcg=" << train_ave(ds, model, ndcg) << '\n';
  return kExitOk;
}

struct InterpolateArgs {
  std::vector<std::string> models;
  std::string valid, out, optimizer = "powell";
  PowellConfig powell;
  int epochs = 100;
  double lr = 1e-5;
};

int cmd_interpolate(const InterpolateArgs& a, std::ostream& out) {
  if (a.models.size() < 2) {
    throw InvalidInput("interpolation needs at least 2 models");
  }
  auto ds = read_letor_file(a.valid);
  std::vector<ScorerPtr> parts;
  for (const auto& path : a.models) {
    parts.push_back(load_model(path));
    check_features(parts.back()->feature_count(), ds.feature_count(),
                   "model '" + path + "'");
  }
  NdcgConfig ndcg;
  std::vector<double> alphas;
  if (a.optimizer == "powell") {
    alphas = optimize_weights_powell(parts, ds, ndcg, a.powell).alphas;
  } else {
    LinearTrainConfig cfg;
    cfg.epochs = a.epochs;
    cfg.learning_rate = a.lr;
    cfg.seed = a.powell.seed;
    alphas = optimize_weights_lambdarank(parts, ds, cfg);
  }
  InterpolatedModel model(parts, alphas);
  ModelReferencer ref = [&](const Scorer& m) -> std::optional<std::string> {
    for (std::size_t i = 0; i < parts.size(); ++i) {
      if (&m == parts[i].get()) return reference_path(a.models[i], a.out);
    }
    return std::nullopt;
  };
  save_model(a.out, model, ref);
  out << "alphas=";
  for (std::size_t i = 0; i < alphas.size(); ++i) {
    out << (i ? "," : "") << format_double(alphas[i]);
  }
  out << "\nave_ndcg=" << fixed(mean_ndcg(ds, model, ndcg).ave_ndcg) << '\n';
  return kExitOk;
}

struct AugmentArgs {
  std::string in_domain, background, out;
  AugmentConfig cfg;
};

int cmd_augment(const AugmentArgs& a, std::ostream& out) {
  a.cfg.validate();
  auto in_domain = read_letor_file(a.in_domain);
  auto background = read_letor_file(a.background);
  if (in_domain.feature_count() != background.feature_count()) {
    throw InvalidInput("feature count mismatch: '" + a.in_domain + "' has " +
                       std::to_string(in_domain.feature_count()) +
                       " features but '" + a.background + "' has " +
                       std::to_string(background.feature_count()));
  }
  auto seeds = select_seed_queries(in_domain, a.cfg);
  auto result = knn_expand(seeds, background, a.cfg);
  write_letor_file(a.out, result.expanded);
  out << "accepted=" << result.expanded.document_count()
      << " scanned=" << result.scanned << '\n';
  return kExitOk;
}

struct EvaluateArgs {
  std::vector<std::string> models;
  std::string data;
  std::optional<std::size_t> baseline;
};

int cmd_evaluate(const EvaluateArgs& a, std::ostream& out) {
  auto ds = read_letor_file(a.data);
  NdcgConfig ndcg;
  std::vector<MetricsReport> reports;
  for (const auto& path : a.models) {
    auto model = load_model(path);
    check_features(model->feature_count(), ds.feature_count(),
                   "model '" + path + "'");
    reports.push_back(mean_ndcg(ds, *model, ndcg));
  }
  if (a.baseline && *a.baseline >= reports.size()) {
    throw InvalidInput("ttest baseline index " + std::to_string(*a.baseline) +
                       " out of range for " + std::to_string(reports.size()) +
                       " models");
  }
  write_report_header(out, a.baseline.has_value());
  for (std::size_t i = 0; i < reports.size(); ++i) {
    std::optional<double> p;
    if (a.baseline) {
      p = paired_t_test(reports[i].per_query_ave(),
                        reports[*a.baseline].per_query_ave())
              .p_value;
    }
    write_report_row(out, a.models[i], reports[i], p);
  }
  return kExitOk;
}

int cmd_experiment(const std::string& spec_path, const std::string& out_dir,
                   std::ostream& out) {
  auto spec = read_experiment_spec(spec_path);
  auto base = fs::absolute(spec_path).parent_path();
  std::optional<fs::path> override_dir;
  if (!out_dir.empty()) override_dir = fs::path(out_dir);
  auto outcome = run_experiment(spec, base, out, override_dir);
  if (outcome.find(kRowInterp3)) {
    out << "augmented_documents=" << outcome.augmented_documents << '\n';
  }
  out << "closed=" << (outcome.output_dir / "closed.tsv").string() << '\n'
      << "open=" << (outcome.output_dir / "open.tsv").string() << '\n';
  return kExitOk;
}

int cmd_synth(uint64_t seed, const std::string& dir, std::ostream& out) {
  auto path = write_shift_bundle(dir, ShiftProfile{}, seed);
  out << "spec=" << path.string() << '\n';
  return kExitOk;
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out,
            std::ostream& err) {
  CLI::App app{"Ranking model adaptation toolkit", "rankadapt"};
  app.set_version_flag("--version", std::string(kVersion));
  app.require_subcommand(1);

  TrainArgs train;
  auto* t = app.add_subcommand("train", "Train a linear LambdaRank model");
  t->add_option("--data", train.data, "LETOR training file")->required();
  t->add_option("--out", train.out, "Output model file")->required();
  t->add_option("--epochs", train.epochs)->capture_default_str();
  t->add_option("--lr", train.lr)->capture_default_str();
  t->add_option("--seed", train.seed)->capture_default_str();
  t->add_flag("--no-shuffle", train.no_shuffle, "Keep query order fixed");

  AdaptArgs adapt;
  auto* ad = app.add_subcommand("adapt", "Boost a background model in-domain");
  ad->add_option("--method", adapt.method)
      ->required()
      ->check(CLI::IsMember({"boost", "smart"}));
  ad->add_option("--background", adapt.background, "Background model file");
  ad->add_flag("--zero-background", adapt.zero_background,
               "Start from the all-zero linear model");
  ad->add_option("--data", adapt.data, "LETOR in-domain file")->required();
  ad->add_option("--out", adapt.out)->required();
  ad->add_option("--rounds", adapt.boost.rounds)->capture_default_str();
  ad->add_option("--shrinkage", adapt.boost.shrinkage)->capture_default_str();
  ad->add_option("--leaves", adapt.boost.leaves)->capture_default_str();
  ad->add_flag("--randomize", adapt.boost.randomize);
  ad->add_option("--sample-rate", adapt.boost.sample_rate)
      ->capture_default_str();
  ad->add_option("--min-leaf", adapt.boost.min_samples_per_leaf)
      ->capture_default_str();
  ad->add_option("--max-step", adapt.boost.max_step,
                 "Bound on |leaf value| for smart; 0 is unbounded")
      ->capture_default_str();
  ad->add_option("--seed", adapt.boost.seed)->capture_default_str();
  ad->add_flag("--trace", adapt.trace, "Print train Ave-NDCG every round");

  InterpolateArgs interp;
  auto* in = app.add_subcommand("interpolate", "Fit interpolation weights");
  in->add_option("--models", interp.models)->required();
  in->add_option("--valid", interp.valid)->required();
  in->add_option("--out", interp.out)->required();
  in->add_option("--optimizer", interp.optimizer)
      ->check(CLI::IsMember({"powell", "lambdarank"}))
      ->capture_default_str();
  in->add_option("--max-iterations", interp.powell.max_iterations)
      ->capture_default_str();
  in->add_option("--grid", interp.powell.line_search_grid)
      ->capture_default_str();
  in->add_option("--span", interp.powell.line_search_span)
      ->capture_default_str();
  in->add_option("--refine", interp.powell.refine_levels)
      ->capture_default_str();
  in->add_option("--tolerance", interp.powell.tolerance)
      ->capture_default_str();
  in->add_option("--seed", interp.powell.seed)->capture_default_str();
  in->add_option("--epochs", interp.epochs, "lambdarank optimizer only")
      ->capture_default_str();
  in->add_option("--lr", interp.lr, "lambdarank optimizer only")
      ->capture_default_str();

  AugmentArgs aug;
  auto* au = app.add_subcommand("augment", "kNN-expand in-domain data");
  au->add_option("--in-domain", aug.in_domain)->required();
  au->add_option("--background", aug.background)->required();
  au->add_option("--out", aug.out)->required();
  au->add_option("--seeds", aug.cfg.seed_query_count, "0 keeps every query")
      ->capture_default_str();
  au->add_option("--k", aug.cfg.neighbors)->capture_default_str();
  au->add_option("--epsilon", aug.cfg.max_distance)->capture_default_str();
  au->add_option("--seed", aug.cfg.seed)->capture_default_str();

  EvaluateArgs eval;
  std::size_t baseline = 0;
  auto* ev = app.add_subcommand("evaluate", "Report NDCG per model");
  ev->add_option("--model", eval.models)->required();
  ev->add_option("--data", eval.data)->required();
  auto* base_opt = ev->add_option("--ttest-baseline", baseline,
                                  "0-based index of the baseline model");

  std::string spec_path, exp_out;
  auto* ex = app.add_subcommand("experiment", "Run a closed/open experiment");
  ex->add_option("--spec", spec_path)->required();
  ex->add_option("--out", exp_out, "Override the spec's output directory");

  std::string profile;
  uint64_t synth_seed = kBundledShiftSeed;
  std::string synth_dir = ".";
  auto* sy = app.add_subcommand("synth", "Generate a synthetic shift bundle");
  sy->add_option("--profile", profile)
      ->required()
      ->check(CLI::IsMember({"shift"}));
  sy->add_option("--seed", synth_seed)->capture_default_str();
  sy->add_option("--out", synth_dir, "Output directory")
      ->capture_default_str();

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) return app.exit(e, out, err);
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  }

  try {
    if (*t) return cmd_train(train, out);
    if (*ad) return cmd_adapt(adapt, out);
    if (*in) return cmd_interpolate(interp, out);
    if (*au) return cmd_augment(aug, out);
    if (*ev) {
      if (*base_opt) eval.baseline = baseline;
      return cmd_evaluate(eval, out);
    }
    if (*ex) return cmd_experiment(spec_path, exp_out, out);
    if (*sy) return cmd_synth(synth_seed, synth_dir, out);
  } catch (const InvalidInput& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const Degenerate& e) {
    err << "error: " << e.what() << '\n';
    return kExitDegenerate;
  } catch (const std::exception& e) {
    err << "internal error: " << e.what() << '\n';
    return kExitInternal;
  }
  return kExitUsage;
}

}  // namespace rankadapt
