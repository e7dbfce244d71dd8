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

// Acceptance checks: one PASS/FAIL line per criterion, nonzero exit if any
// fails.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <map>
#include <memory>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "fixtures.h"
#include "rankadapt/augment.h"
#include "rankadapt/boosting.h"
#include "rankadapt/cli.h"
#include "rankadapt/experiment.h"
#include "rankadapt/interpolation.h"
#include "rankadapt/lambda.h"
#include "rankadapt/linear_ranker.h"
#include "rankadapt/metrics.h"
#include "rankadapt/model_io.h"
#include "rankadapt/regression_tree.h"
#include "rankadapt/synth.h"

namespace rankadapt {
namespace {

namespace fs = std::filesystem;
using Clock = std::chrono::steady_clock;

struct Outcome {
  bool pass;
  std::string detail;
};

std::string fmt(const char* f, double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, v);
  return buf;
}

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

fs::path scratch(const std::string& name) {
  auto dir = fs::temp_directory_path() / ("rankadapt_acceptance_" + name);
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

Outcome gradient_check() {
  const auto t0 = Clock::now();
  Rng rng(1);
  const double h = 1e-5;
  double worst = 0.0;
  for (int i = 0; i < 1000; ++i) {
    const double o = -10.0 + 20.0 * rng.uniform();
    const double fd = (pair_cost(o + h, 0.0) - pair_cost(o - h, 0.0)) / (2 * h);
    worst = std::max(worst, std::abs(fd - pair_cost_gradient(o)));
  }
  const double t = seconds_since(t0);
  return {worst <= 1e-6 && t < 1.0,
          "max |fd - grad| " + fmt("%.3g", worst) + " over 1000 points, " +
              fmt("%.3f", t) + " s"};
}

Outcome delta_oracle() {
  Rng rng(2);
  double worst = 0.0;
  int queries = 0;
  long pairs = 0;
  while (queries < 200) {
    const auto q = testing::random_query(rng, 10, 1, "q");
    const auto labels = q.labels();
    if (*std::max_element(labels.begin(), labels.end()) == 0) continue;
    ++queries;
    const auto s = testing::random_scores(rng, q.size());
    NdcgConfig cfg;
    const double base = testing::reference_ndcg(labels, s, cfg.truncation);
    for (std::size_t i = 0; i < q.size(); ++i) {
      for (std::size_t j = i + 1; j < q.size(); ++j) {
        const double oracle =
            testing::reference_swapped_ndcg(labels, s, i, j, cfg.truncation) -
            base;
        worst = std::max(worst, std::abs(delta_ndcg(q, s, i, j, cfg) - oracle));
        ++pairs;
      }
    }
  }
  return {worst <= 1e-12, "max error " + fmt("%.3g", worst) + " over " +
                              std::to_string(pairs) + " pairs"};
}

Outcome lambda_conservation() {
  Rng rng(3);
  double worst = 0.0;
  bool weights_ok = true;
  for (int t = 0; t < 200; ++t) {
    const auto q = testing::random_query(rng, 10, 1, "q");
    const auto g = compute_lambdas(q, testing::random_scores(rng, q.size()),
                                   NdcgConfig{});
    double sum = 0.0;
    for (double r : g.residuals) sum += r;
    worst = std::max(worst, std::abs(sum));
    for (double w : g.newton_weights) weights_ok = weights_ok && w >= 0.0;
  }
  return {worst < 1e-12 && weights_ok,
          "max |sum residuals| " + fmt("%.3g", worst) +
              (weights_ok ? ", weights >= 0" : ", NEGATIVE weight")};
}

double direct_loss(const std::vector<double>& y, const std::vector<double>& h,
                   double beta) {
  double s = 0.0;
  for (std::size_t i = 0; i < y.size(); ++i) {
    s += (y[i] - beta * h[i]) * (y[i] - beta * h[i]);
  }
  return s;
}

Outcome ls_optimality() {
  Rng rng(4);
  int beaten = 0;
  double worst = 0.0;
  for (int t = 0; t < 100; ++t) {
    const std::size_t n = 2 + rng.below(50);
    std::vector<double> y(n), h(n);
    for (auto& v : y) v = rng.normal();
    for (auto& v : h) v = rng.normal();
    const double beta = optimal_beta(y, h);
    const double best = direct_loss(y, h, beta);
    for (int k = 0; k < 100; ++k) {
      const double b = beta + 4.0 * rng.normal();
      if (direct_loss(y, h, b) < best) ++beaten;
    }
    worst = std::max(worst, std::abs(ls_loss(y, h) - best));
  }
  return {beaten == 0 && worst <= 1e-10,
          std::to_string(beaten) + " of 10000 random betas beat beta*; max " +
              "|ls_loss - direct| " + fmt("%.3g", worst)};
}

// Midpoints in increasing order; first maximal reduction wins.
std::optional<double> scan_best_threshold(const std::vector<double>& xs,
                                          const std::vector<double>& ys) {
  auto sse = [](const std::vector<double>& v) {
    if (v.empty()) return 0.0;
    double m = 0.0;
    for (double x : v) m += x;
    m /= static_cast<double>(v.size());
    double s = 0.0;
    for (double x : v) s += (x - m) * (x - m);
    return s;
  };
  std::set<double> distinct(xs.begin(), xs.end());
  std::vector<double> values(distinct.begin(), distinct.end());
  std::vector<std::pair<double, double>> cands;
  for (std::size_t i = 0; i + 1 < values.size(); ++i) {
    const double t = values[i] + (values[i + 1] - values[i]) / 2.0;
    std::vector<double> l, r;
    for (std::size_t k = 0; k < xs.size(); ++k) {
      (xs[k] <= t ? l : r).push_back(ys[k]);
    }
    cands.push_back({t, sse(ys) - sse(l) - sse(r)});
  }
  if (cands.empty() || sse(ys) == 0.0) return std::nullopt;
  double best = cands.front().second;
  for (auto& c : cands) best = std::max(best, c.second);
  for (auto& c : cands) {
    if (c.second >= best - 1e-9 * std::max(1.0, std::abs(best))) return c.first;
  }
  return std::nullopt;
}

Outcome tree_oracle() {
  Rng gen(5);
  int agree = 0;
  for (int t = 0; t < 50; ++t) {
    const std::size_t n = 1 + gen.below(12);
    std::vector<double> xs(n), ys(n);
    for (std::size_t i = 0; i < n; ++i) {
      xs[i] = static_cast<double>(gen.below(8));  // repeats occur
      ys[i] = gen.normal();
    }
    std::vector<std::vector<double>> rows;
    for (double v : xs) rows.push_back({v});
    const auto x = FeatureMatrix::from_rows(rows);
    Rng rng(0);
    TreeConfig cfg;
    cfg.max_leaves = 2;
    const auto tree = fit_regression_tree(x, ys, cfg, rng);
    const auto expected = scan_best_threshold(xs, ys);
    const bool ok = expected ? tree.leaf_count() == 2 &&
                                   tree.nodes()[0].threshold == *expected
                             : tree.leaf_count() == 1;
    agree += ok;
  }
  return {agree == 50, std::to_string(agree) + " of 50 fixtures agree"};
}

Outcome boost_feature_oracle() {
  int agree = 0;
  for (uint64_t seed = 1; seed <= 20; ++seed) {
    Rng rng(600 + seed);
    std::vector<Query> qs;
    for (int qi = 0; qi < 10; ++qi) {
      Query q{"q" + std::to_string(qi), {}};
      for (int d = 0; d < 10; ++d) {
        Document doc{static_cast<int>(rng.below(5)), std::vector<double>(10)};
        for (auto& v : doc.features) v = rng.normal();
        q.documents.push_back(std::move(doc));
      }
      qs.push_back(std::move(q));
    }
    const auto data = Dataset::make(std::move(qs), 10);
    auto background =
        std::make_shared<LinearModel>(std::vector<double>(10, 0.0));
    BoostConfig cfg;
    cfg.rounds = 1;
    const auto ens = lambda_boost(background, data, cfg, NdcgConfig{});

    std::vector<double> y;
    std::vector<std::vector<double>> cols(10);
    for (const auto& q : data.queries()) {
      const auto g = compute_lambdas(q, std::vector<double>(q.size(), 0.0),
                                     NdcgConfig{});
      for (std::size_t i = 0; i < q.size(); ++i) {
        y.push_back(g.residuals[i]);
        for (std::size_t f = 0; f < 10; ++f) {
          cols[f].push_back(q.documents[i].features[f]);
        }
      }
    }
    std::size_t best = 0;
    double best_loss = INFINITY;
    for (std::size_t f = 0; f < 10; ++f) {
      double yh = 0.0, hh = 0.0;
      for (std::size_t i = 0; i < y.size(); ++i) {
        yh += y[i] * cols[f][i];
        hh += cols[f][i] * cols[f][i];
      }
      const double loss = direct_loss(y, cols[f], yh / hh);
      if (loss < best_loss) {
        best_loss = loss;
        best = f;
      }
    }
    agree += std::get<SingleFeatureBasis>(ens.stages().at(0).basis)
                 .feature_index == best;
  }
  return {agree == 20, std::to_string(agree) + " of 20 fixtures agree"};
}

Outcome training_effectiveness() {
  const auto t0 = Clock::now();
  const auto sep = testing::threshold_fixture(7, 40, 10, 5);
  BoostConfig cfg;
  cfg.rounds = 100;
  cfg.leaves = 4;
  cfg.shrinkage = 0.5;
  auto zero = std::make_shared<LinearModel>(std::vector<double>(5, 0.0));
  const auto smart = lambda_smart(zero, sep, cfg, NdcgConfig{});
  const double smart_ave = mean_ndcg(sep, smart, NdcgConfig{}).ave_ndcg;
  const double t = seconds_since(t0);

  const auto lin_data = testing::label_feature_fixture(7);
  LinearTrainConfig lcfg;
  lcfg.epochs = 100;
  lcfg.learning_rate = 1e-3;
  const auto lin = train_linear_lambdarank(lin_data, lcfg);
  const double lin_ave = mean_ndcg(lin_data, lin, NdcgConfig{}).ave_ndcg;
  return {smart_ave >= 0.98 && t < 30.0 && lin_ave >= 0.99,
          "LambdaSMART train Ave-NDCG " + fmt("%.6f", smart_ave) + " in " +
              fmt("%.2f", t) + " s; linear " + fmt("%.6f", lin_ave)};
}

double ave_of(const Scorer& m, const Dataset& d) {
  return mean_ndcg(d, m, NdcgConfig{}).ave_ndcg;
}

Outcome interpolation_optimality() {
  const auto valid = testing::label_feature_fixture(8, 20, 10, 3);
  std::vector<ScorerPtr> pair = {
      std::make_shared<LinearModel>(std::vector<double>{1.0, 0.0, 0.0}),
      std::make_shared<LinearModel>(std::vector<double>{-1.0, 0.0, 0.0})};
  const auto perfect =
      optimize_weights_powell(pair, valid, NdcgConfig{}, PowellConfig{});
  bool ok = perfect.objective == 1.0;

  double worst_gap = INFINITY;
  for (uint64_t seed = 1; seed <= 10; ++seed) {
    const auto data = testing::random_dataset(900 + seed, 20, 12, 4);
    Rng rng(seed);
    std::vector<ScorerPtr> comps;
    double best_single = 0.0;
    for (int c = 0; c < 3; ++c) {
      std::vector<double> w(4);
      for (auto& v : w) v = rng.normal();
      comps.push_back(std::make_shared<LinearModel>(w));
      best_single = std::max(best_single, ave_of(*comps.back(), data));
    }
    const auto r =
        optimize_weights_powell(comps, data, NdcgConfig{}, PowellConfig{});
    worst_gap = std::min(worst_gap, r.objective - best_single);
  }
  ok = ok && worst_gap >= -1e-12;
  return {ok, "perfect+adversarial " + fmt("%.17g", perfect.objective) +
                  "; min(Powell - best single) over 10 fixtures " +
                  fmt("%.3g", worst_gap)};
}

Outcome augmentation_oracle() {
  const auto fx = testing::knn_fixture();
  bool ok = true;
  std::vector<std::size_t> sizes;
  for (double eps : {0.01, 0.05, 0.2}) {
    for (std::size_t k : {1, 2, 3}) {
      AugmentConfig cfg;
      cfg.neighbors = k;
      cfg.max_distance = eps;
      const auto got = knn_expand(fx.seeds, fx.background, cfg);
      std::vector<std::pair<std::string, std::size_t>> ids;
      for (const auto& q : got.expanded.queries()) {
        const auto dash = q.qid.rfind('-');
        ids.push_back({q.qid.substr(4, dash - 4),
                       std::stoul(q.qid.substr(dash + 1))});
      }
      ok = ok && ids == testing::brute_force_accept(fx.seeds, fx.background,
                                                    k, eps);
      if (k == 3) sizes.push_back(got.expanded.query_count());
    }
  }
  bool monotone = true;
  // Accept sets, not just sizes, must nest.
  std::vector<std::set<std::string>> sets;
  for (double eps : {0.01, 0.05, 0.2}) {
    AugmentConfig cfg;
    cfg.max_distance = eps;
    std::set<std::string> s;
    const auto got = knn_expand(fx.seeds, fx.background, cfg);
    for (const auto& q : got.expanded.queries()) s.insert(q.qid);
    sets.push_back(std::move(s));
  }
  for (std::size_t i = 0; i + 1 < sets.size(); ++i) {
    monotone = monotone && std::includes(sets[i + 1].begin(), sets[i + 1].end(),
                                         sets[i].begin(), sets[i].end());
  }
  return {ok && monotone,
          std::string(ok ? "accept sets match the oracle" : "ORACLE MISMATCH") +
              " for k in {1,2,3}; k=3 sizes " + std::to_string(sizes[0]) + "/" +
              std::to_string(sizes[1]) + "/" + std::to_string(sizes[2]) +
              (monotone ? ", nested in epsilon" : ", NOT nested")};
}

// Runs a command twice and compares stdout, exit code and listed files.
bool rerun_identical(const std::vector<std::string>& args,
                     const std::vector<fs::path>& files, std::string& why) {
  auto once = [&](std::string& out, std::map<fs::path, std::string>& snap) {
    std::ostringstream o, e;
    const int code = run_cli(args, o, e);
    out = std::to_string(code) + "\n" + o.str() + e.str();
    for (const auto& f : files) snap[f] = slurp(f);
    return code;
  };
  std::string out1, out2;
  std::map<fs::path, std::string> a, b;
  if (once(out1, a) != 0) {
    why = args[0] + " failed: " + out1;
    return false;
  }
  once(out2, b);
  if (out1 != out2 || a != b) {
    why = args[0] + " differs on rerun";
    return false;
  }
  return true;
}

Outcome determinism_and_round_trip() {
  const auto dir = scratch("determinism");
  auto p = [&](const char* name) { return (dir / name).string(); };
  write_letor_file(p("sep.letor"), testing::threshold_fixture(3, 12, 8, 4));
  write_letor_file(p("valid.letor"), testing::threshold_fixture(4, 8, 8, 4));
  const auto fx = testing::knn_fixture();
  write_letor_file(p("seeds.letor"), fx.seeds);
  write_letor_file(p("bg.letor"), fx.background);

  using Args = std::vector<std::string>;
  const std::vector<std::pair<Args, std::vector<fs::path>>> commands = {
      {{"train", "--data", p("sep.letor"), "--out", p("lin.json"), "--lr",
        "0.01", "--epochs", "20", "--seed", "5"},
       {p("lin.json")}},
      {{"adapt", "--method", "boost", "--background", p("lin.json"), "--data",
        p("sep.letor"), "--out", p("boost.json"), "--rounds", "20"},
       {p("boost.json")}},
      {{"adapt", "--method", "smart", "--background", p("lin.json"), "--data",
        p("sep.letor"), "--out", p("smart.json"), "--rounds", "20",
        "--randomize", "--seed", "9", "--trace"},
       {p("smart.json")}},
      {{"interpolate", "--models", p("lin.json"), p("smart.json"), "--valid",
        p("valid.letor"), "--out", p("mix.json")},
       {p("mix.json")}},
      {{"interpolate", "--models", p("lin.json"), p("smart.json"), "--valid",
        p("valid.letor"), "--out", p("mix_lr.json"), "--optimizer",
        "lambdarank", "--lr", "0.01", "--epochs", "10", "--seed", "3"},
       {p("mix_lr.json")}},
      {{"augment", "--in-domain", p("seeds.letor"), "--background",
        p("bg.letor"), "--out", p("e2.letor"), "--epsilon", "0.05"},
       {p("e2.letor")}},
      {{"evaluate", "--model", p("lin.json"), "--model", p("smart.json"),
        "--model", p("mix.json"), "--data", p("valid.letor"),
        "--ttest-baseline", "0"},
       {}},
      {{"synth", "--profile", "shift", "--seed", "11", "--out", p("bundle")},
       {dir / "bundle" / "experiment.json", dir / "bundle" / "open_test.letor"}},
  };
  std::string why;
  bool ok = true;
  for (const auto& [args, files] : commands) {
    ok = ok && rerun_identical(args, files, why);
  }

  if (ok) {
    // Short experiment on the generated bundle.
    const auto spec_path = dir / "bundle" / "experiment.json";
    auto spec = read_experiment_spec(spec_path);
    spec.linear.epochs = 3;
    spec.lambda_boost.rounds = 10;
    spec.lambda_smart.rounds = 10;
    spec.powell.max_iterations = 2;
    std::ofstream(spec_path) << spec.to_json().dump(2);
    const auto res = dir / "bundle" / "results";
    ok = rerun_identical({"experiment", "--spec", spec_path.string()},
                         {res / "closed.tsv", res / "open.tsv",
                          res / "run.json", res / "models" / "lambda_smart.json",
                          res / "models" / "interpolate_3way.json"},
                         why);
  }

  // Round trip of a model using every node and stage kind.
  const auto data = testing::threshold_fixture(12, 12, 8, 4);
  auto bg = std::make_shared<LinearModel>(
      std::vector<double>{0.1, -0.3, 1e-7, 2.5});
  BoostConfig cfg;
  cfg.rounds = 6;
  cfg.leaves = 5;
  cfg.randomize = true;
  cfg.seed = 8;
  auto smart = std::make_shared<BoostedEnsemble>(
      lambda_smart(bg, data, cfg, NdcgConfig{}));
  cfg.rounds = 3;
  auto boosted =
      std::make_shared<BoostedEnsemble>(lambda_boost(smart, data, cfg, {}));
  InterpolatedModel model(
      {boosted, std::make_shared<LinearModel>(
                    std::vector<double>{1.0 / 3.0, 0.7, -2.0 / 7.0, 0.0})},
      {0.6180339887498949, -1.0 / 7.0});
  save_model(dir / "rt.json", model);
  const auto back = load_model(dir / "rt.json");
  Rng rng(10);
  int mismatches = 0;
  for (int i = 0; i < 1000; ++i) {
    std::vector<double> x(4);
    for (auto& v : x) v = rng.normal() * std::pow(10.0, rng.normal() * 3);
    mismatches += model.score(x) != back->score(x);
  }
  ok = ok && mismatches == 0;
  return {ok, (why.empty() ? std::string("9 commands rerun byte-identical")
                           : why) +
                  "; round trip " + std::to_string(mismatches) +
                  " mismatches on 1000 inputs"};
}

Outcome qualitative_replication() {
  const auto t0 = Clock::now();
  const auto dir = scratch("shift");
  std::ostringstream out, err;
  int code = run_cli({"synth", "--profile", "shift", "--out",
                      (dir / "bundle").string()},
                     out, err);
  if (code == 0) {
    code = run_cli({"experiment", "--spec",
                    (dir / "bundle" / "experiment.json").string()},
                   out, err);
  }
  if (code != 0) return {false, "experiment failed: " + err.str()};

  auto table = [&](const char* name) {
    std::map<std::string, double> ave;
    std::istringstream in(slurp(dir / "bundle" / "results" / name));
    std::string line;
    std::getline(in, line);
    while (std::getline(in, line)) {
      std::vector<std::string> cells;
      std::istringstream row(line);
      std::string cell;
      while (std::getline(row, cell, '\t')) cells.push_back(cell);
      ave[cells[0]] = std::stod(cells[4]);
    }
    return ave;
  };
  auto closed = table("closed.tsv");
  auto open = table("open.tsv");
  const double t = seconds_since(t0);
  const bool a = closed[kRowSmart] >= closed[kRowInterp2];
  const bool b = open[kRowInterp2] >= open[kRowSmart];
  const bool r = open[kRowSmart] >= open[kRowSmartNorand];
  auto f4 = [](double v) { return fmt("%.4f", v); };
  return {a && b && r && t < 300.0,
          "seed " + std::to_string(kBundledShiftSeed) + ": closed SMART " +
              f4(closed[kRowSmart]) + (a ? " >= " : " < ") + "interp " +
              f4(closed[kRowInterp2]) + "; open interp " +
              f4(open[kRowInterp2]) + (b ? " >= " : " < ") + "SMART " +
              f4(open[kRowSmart]) + "; open rand " + f4(open[kRowSmart]) +
              (r ? " >= " : " < ") + "norand " + f4(open[kRowSmartNorand]) +
              "; " + fmt("%.1f", t) + " s"};
}

}  // namespace
}  // namespace rankadapt

int main() {
  using namespace rankadapt;
  const std::vector<std::pair<int, std::function<Outcome()>>> criteria = {
      {1, gradient_check},        {2, delta_oracle},
      {3, lambda_conservation},   {4, ls_optimality},
      {5, tree_oracle},           {6, boost_feature_oracle},
      {7, training_effectiveness}, {8, interpolation_optimality},
      {9, augmentation_oracle},   {10, determinism_and_round_trip},
      {11, qualitative_replication},
  };
  int failed = 0;
  for (const auto& [id, check] : criteria) {
    Outcome o;
    try {
      o = check();
    } catch (const std::exception& e) {
      o = {false, std::string("threw: ") + e.what()};
    }
    failed += !o.pass;
    std::printf("criterion %2d %s  %s\n", id, o.pass ? "PASS" : "FAIL",
                o.detail.c_str());
    std::fflush(stdout);
  }
  std::printf("%d of %zu criteria passed\n",
              static_cast<int>(criteria.size()) - failed, criteria.size());
  return failed == 0 ? 0 : 1;
}
