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

#ifndef RANKADAPT_METRICS_H_
#define RANKADAPT_METRICS_H_

#include <cstddef>
#include <map>
#include <optional>
#include <ostream>
#include <span>
#include <string>
#include <vector>

#include "rankadapt/dataset.h"
#include "rankadapt/scorer.h"

namespace rankadapt {

// NDCG@L with gain 2^r - 1 and discount 1 / ln(1 + j), j the 1-based rank.
// Ave-NDCG averages NDCG@k over k in [ave_first, ave_last].
struct NdcgConfig {
  int truncation = 10;
  int ave_first = 1;
  int ave_last = 10;

  void validate() const;
};

inline double gain(int label) {
  return static_cast<double>((1 << label) - 1);
}

// 1 / ln(2 + rank) for a 0-based rank.
double discount(std::size_t rank);

double dcg_at_k(std::span<const int> labels_in_rank_order, int k);

// Document indices sorted by descending score; equal scores keep the lower
// document index first.
std::vector<std::size_t> rank_order(std::span<const double> scores);

// DCG@k of the label-sorted order.
double ideal_dcg(std::span<const int> labels, int k);

// Absent when the ideal DCG is 0 (no relevant document).
std::optional<double> ndcg_at_k(std::span<const int> labels,
                                std::span<const double> scores, int k);
std::optional<double> ndcg_at_k(const Query& query,
                                std::span<const double> scores,
                                const NdcgConfig& config);

// NDCG gained by exchanging the rank positions of documents i and j in the
// current score-sorted order, at the configured truncation. Closed form: only
// the two positions change. 0 when the ideal DCG is 0.
double delta_ndcg(const Query& query, std::span<const double> scores,
                  std::size_t i, std::size_t j, const NdcgConfig& config);

struct QueryMetrics {
  std::string qid;
  std::map<int, double> ndcg_at;
  double ave_ndcg = 0.0;
};

struct MetricsReport {
  std::map<int, double> ndcg_at;
  double ave_ndcg = 0.0;
  std::vector<QueryMetrics> per_query;
  // Queries whose labels are all 0; they have no defined NDCG.
  std::size_t excluded_queries = 0;

  // Per-query Ave-NDCG in per_query order.
  std::vector<double> per_query_ave() const;
};

inline const std::vector<int> kReportCutoffs = {1, 3, 10};

// Throws Degenerate("no evaluable queries") when every query is all-zero.
MetricsReport evaluate_scores(const Dataset& dataset, const QueryScores& scores,
                              const NdcgConfig& config,
                              std::span<const int> cutoffs = kReportCutoffs);
MetricsReport mean_ndcg(const Dataset& dataset, const Scorer& scorer,
                        const NdcgConfig& config,
                        std::span<const int> cutoffs = kReportCutoffs);

// Ave-NDCG only; the objective used by weight search and training traces.
double ave_ndcg(const Dataset& dataset, const QueryScores& scores,
                const NdcgConfig& config);

struct TTestResult {
  double t_statistic = 0.0;
  double p_value = 1.0;
};

// Two-sided paired t-test with n - 1 degrees of freedom. When the
// differences have zero variance: p = 1 if their mean is 0, else p = 0 with
// an infinite t.
TTestResult paired_t_test(std::span<const double> a, std::span<const double> b);

// Tab-separated table `model NDCG@1 NDCG@3 NDCG@10 AveNDCG`, values with four
// decimals. When p_values is non-empty a `p_value` column is appended.
void write_report_header(std::ostream& out, bool with_p_value = false);
void write_report_row(std::ostream& out, const std::string& model,
                      const MetricsReport& report,
                      std::optional<double> p_value = std::nullopt);

}  // namespace rankadapt

#endif  // RANKADAPT_METRICS_H_
