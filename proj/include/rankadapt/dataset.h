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

#ifndef RANKADAPT_DATASET_H_
#define RANKADAPT_DATASET_H_

#include <cstddef>
#include <cstdint>
#include <istream>
#include <ostream>
#include <span>
#include <string>
#include <tuple>
#include <vector>

namespace rankadapt {

// Relevance grades run 0 (bad) to 4 (perfect).
inline constexpr int kMaxLabel = 4;

struct Document {
  int label = 0;
  std::vector<double> features;

  bool operator==(const Document&) const = default;
};

struct Query {
  std::string qid;
  std::vector<Document> documents;

  std::size_t size() const { return documents.size(); }
  std::vector<int> labels() const;

  bool operator==(const Query&) const = default;
};

// Query-grouped labeled feature vectors. Construct through `Dataset::make`
// (or the parser), which validates the invariants: unique qids, non-empty
// queries, labels in 0..4, one feature dimensionality for every document.
class Dataset {
 public:
  Dataset() = default;

  static Dataset make(std::vector<Query> queries, std::size_t feature_count,
                      std::vector<std::string> feature_names = {});

  std::span<const Query> queries() const { return queries_; }
  const Query& query(std::size_t i) const { return queries_.at(i); }
  std::size_t query_count() const { return queries_.size(); }
  std::size_t document_count() const;
  std::size_t feature_count() const { return feature_count_; }
  const std::vector<std::string>& feature_names() const {
    return feature_names_;
  }
  bool empty() const { return queries_.empty(); }

  bool operator==(const Dataset&) const = default;

 private:
  std::vector<Query> queries_;
  std::size_t feature_count_ = 0;
  std::vector<std::string> feature_names_;
};

// Reads LETOR/SVMLight ranking text: `<label> qid:<id> <fid>:<value> ...`,
// `#` comments, LF or CRLF. Missing feature ids densify to 0.0 and the
// feature count is the largest fid seen. Throws InvalidInput with the line
// number on malformed input.
Dataset parse_letor(std::istream& in);
Dataset parse_letor_string(const std::string& text);
Dataset read_letor_file(const std::string& path);

// Writes one line per document with every feature id present, using the
// shortest decimal representation that round-trips.
void write_letor(std::ostream& out, const Dataset& dataset);
void write_letor_file(const std::string& path, const Dataset& dataset);

struct SplitFractions {
  double train = 0.8;
  double valid = 0.1;
  double test = 0.1;
};

// Query-level partition into (train, valid, test). Part sizes use the
// largest-remainder rule; queries are assigned after a seeded shuffle and
// keep their original relative order inside each part.
std::tuple<Dataset, Dataset, Dataset> split_dataset(const Dataset& dataset,
                                                    SplitFractions fractions,
                                                    uint64_t seed);

// Concatenation of datasets with equal feature counts; qids must not clash.
Dataset concat(std::span<const Dataset> parts);

// Shortest decimal string that parses back to exactly `value`.
std::string format_double(double value);

}  // namespace rankadapt

#endif  // RANKADAPT_DATASET_H_
