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

#include "rankadapt/metrics.h"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <numeric>

#include <boost/math/distributions/students_t.hpp>

#include "rankadapt/error.h"

namespace rankadapt {
namespace {

// Cumulative NDCG@1..max_k for one query, or empty when undefined.
std::vector<double> ndcg_curve(std::span<const int> labels,
                               std::span<const double> scores,
                               std::size_t max_k) {
  std::vector<int> ideal(labels.begin(), labels.end());
  std::sort(ideal.begin(), ideal.end(), std::greater<>());
  if (ideal.empty() || ideal.front() == 0) return {};

  const auto order = rank_order(scores);
  std::vector<double> curve(max_k);
  double dcg = 0.0;
  double idcg = 0.0;
  for (std::size_t r = 0; r < max_k; ++r) {
    if (r < order.size()) {
      dcg += gain(labels[order[r]]) * discount(r);
      idcg += gain(ideal[r]) * discount(r);
    }
    curve[r] = dcg / idcg;
  }
  return curve;
}

}  // namespace

void NdcgConfig::validate() const {
  if (truncation < 1) throw InvalidInput("NDCG truncation must be >= 1");
  if (ave_first < 1 || ave_first > ave_last) {
    throw InvalidInput("Ave-NDCG range must satisfy 1 <= first <= last");
  }
}

double discount(std::size_t rank) {
  return 1.0 / std::log(2.0 + static_cast<double>(rank));
}

double dcg_at_k(std::span<const int> labels_in_rank_order, int k) {
  if (k < 1) throw InvalidInput("dcg_at_k: k must be >= 1");
  const std::size_t n =
      std::min(labels_in_rank_order.size(), static_cast<std::size_t>(k));
  double dcg = 0.0;
  for (std::size_t r = 0; r < n; ++r) {
    dcg += gain(labels_in_rank_order[r]) * discount(r);
  }
  return dcg;
}

std::vector<std::size_t> rank_order(std::span<const double> scores) {
  std::vector<std::size_t> order(scores.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) {
                     return scores[a] > scores[b];
                   });
  return order;
}

double ideal_dcg(std::span<const int> labels, int k) {
  std::vector<int> sorted(labels.begin(), labels.end());
  std::sort(sorted.begin(), sorted.end(), std::greater<>());
  return dcg_at_k(sorted, k);
}

std::optional<double> ndcg_at_k(std::span<const int> labels,
                                std::span<const double> scores, int k) {
  if (labels.size() != scores.size()) {
    throw InvalidInput("ndcg_at_k: " + std::to_string(scores.size()) +
                       " scores for " + std::to_string(labels.size()) +
                       " documents");
  }
  const double idcg = ideal_dcg(labels, k);
  if (idcg == 0.0) return std::nullopt;
  std::vector<int> ranked;
  ranked.reserve(labels.size());
  for (auto idx : rank_order(scores)) ranked.push_back(labels[idx]);
  return dcg_at_k(ranked, k) / idcg;
}

std::optional<double> ndcg_at_k(const Query& query,
                                std::span<const double> scores,
                                const NdcgConfig& config) {
  const auto labels = query.labels();
  return ndcg_at_k(labels, scores, config.truncation);
}

double delta_ndcg(const Query& query, std::span<const double> scores,
                  std::size_t i, std::size_t j, const NdcgConfig& config) {
  const std::size_t n = query.size();
  if (scores.size() != n) {
    throw InvalidInput("delta_ndcg: score count does not match documents");
  }
  if (i >= n || j >= n) throw InvalidInput("delta_ndcg: index out of range");
  if (i == j) throw InvalidInput("delta_ndcg: i and j must differ");

  const auto labels = query.labels();
  const double idcg = ideal_dcg(labels, config.truncation);
  if (idcg == 0.0) return 0.0;

  const auto order = rank_order(scores);
  std::size_t rank_i = 0;
  std::size_t rank_j = 0;
  for (std::size_t r = 0; r < n; ++r) {
    if (order[r] == i) rank_i = r;
    if (order[r] == j) rank_j = r;
  }
  const auto k = static_cast<std::size_t>(config.truncation);
  const double disc_i = rank_i < k ? discount(rank_i) : 0.0;
  const double disc_j = rank_j < k ? discount(rank_j) : 0.0;
  return (gain(labels[i]) - gain(labels[j])) * (disc_j - disc_i) / idcg;
}

std::vector<double> MetricsReport::per_query_ave() const {
  std::vector<double> out;
  out.reserve(per_query.size());
  for (const auto& q : per_query) out.push_back(q.ave_ndcg);
  return out;
}

MetricsReport evaluate_scores(const Dataset& dataset, const QueryScores& scores,
                              const NdcgConfig& config,
                              std::span<const int> cutoffs) {
  config.validate();
  if (scores.size() != dataset.query_count()) {
    throw InvalidInput("evaluate_scores: score table does not match dataset");
  }
  std::size_t max_k = static_cast<std::size_t>(config.ave_last);
  for (int c : cutoffs) {
    if (c < 1) throw InvalidInput("NDCG cutoffs must be >= 1");
    max_k = std::max(max_k, static_cast<std::size_t>(c));
  }

  MetricsReport report;
  // Sums over evaluable queries of NDCG@k, k = 1..max_k.
  std::vector<double> sums(max_k, 0.0);
  for (std::size_t qi = 0; qi < dataset.query_count(); ++qi) {
    const auto& query = dataset.query(qi);
    const auto labels = query.labels();
    if (scores[qi].size() != labels.size()) {
      throw InvalidInput("evaluate_scores: score count mismatch for query '" +
                         query.qid + "'");
    }
    const auto curve = ndcg_curve(labels, scores[qi], max_k);
    if (curve.empty()) {
      ++report.excluded_queries;
      continue;
    }
    QueryMetrics qm;
    qm.qid = query.qid;
    for (int c : cutoffs) qm.ndcg_at[c] = curve[c - 1];
    double ave = 0.0;
    for (int k = config.ave_first; k <= config.ave_last; ++k) {
      ave += curve[k - 1];
    }
    qm.ave_ndcg = ave / (config.ave_last - config.ave_first + 1);
    for (std::size_t k = 0; k < max_k; ++k) sums[k] += curve[k];
    report.per_query.push_back(std::move(qm));
  }

  if (report.per_query.empty()) throw Degenerate("no evaluable queries");
  const double count = static_cast<double>(report.per_query.size());
  for (int c : cutoffs) report.ndcg_at[c] = sums[c - 1] / count;
  double ave = 0.0;
  for (int k = config.ave_first; k <= config.ave_last; ++k) {
    ave += sums[k - 1] / count;
  }
  report.ave_ndcg = ave / (config.ave_last - config.ave_first + 1);
  return report;
}

MetricsReport mean_ndcg(const Dataset& dataset, const Scorer& scorer,
                        const NdcgConfig& config,
                        std::span<const int> cutoffs) {
  return evaluate_scores(dataset, score_dataset(scorer, dataset), config,
                         cutoffs);
}

double ave_ndcg(const Dataset& dataset, const QueryScores& scores,
                const NdcgConfig& config) {
  return evaluate_scores(dataset, scores, config, {}).ave_ndcg;
}

TTestResult paired_t_test(std::span<const double> a,
                          std::span<const double> b) {
  if (a.size() != b.size()) {
    throw InvalidInput("paired_t_test: sequences differ in length");
  }
  if (a.size() < 2) throw InvalidInput("paired_t_test: need at least 2 pairs");
  const std::size_t n = a.size();
  std::vector<double> diff(n);
  for (std::size_t i = 0; i < n; ++i) diff[i] = a[i] - b[i];
  const double mean =
      std::accumulate(diff.begin(), diff.end(), 0.0) / static_cast<double>(n);
  double ss = 0.0;
  for (double d : diff) ss += (d - mean) * (d - mean);
  const double variance = ss / static_cast<double>(n - 1);

  // Zero variance relative to the scale of the differences, so a constant
  // shift that picked up rounding noise still counts as degenerate.
  double scale = 0.0;
  for (double d : diff) scale = std::max(scale, std::abs(d));
  if (scale == 0.0) return {0.0, 1.0};
  if (std::sqrt(variance) <= 1e-12 * scale) {
    return {std::copysign(std::numeric_limits<double>::infinity(), mean), 0.0};
  }

  const double t = mean / std::sqrt(variance / static_cast<double>(n));
  boost::math::students_t dist(static_cast<double>(n - 1));
  const double p =
      2.0 * boost::math::cdf(boost::math::complement(dist, std::abs(t)));
  return {t, std::min(p, 1.0)};
}

void write_report_header(std::ostream& out, bool with_p_value) {
  out << "model\tNDCG@1\tNDCG@3\tNDCG@10\tAveNDCG";
  if (with_p_value) out << "\tp_value";
  out << '\n';
}

void write_report_row(std::ostream& out, const std::string& model,
                      const MetricsReport& report,
                      std::optional<double> p_value) {
  char buf[64];
  out << model;
  for (int c : {1, 3, 10}) {
    auto it = report.ndcg_at.find(c);
    std::snprintf(buf, sizeof(buf), "\t%.4f",
                  it == report.ndcg_at.end() ? 0.0 : it->second);
    out << buf;
  }
  std::snprintf(buf, sizeof(buf), "\t%.4f", report.ave_ndcg);
  out << buf;
  if (p_value) {
    std::snprintf(buf, sizeof(buf), "\t%.6f", *p_value);
    out << buf;
  }
  out << '\n';
}

}  // namespace rankadapt
