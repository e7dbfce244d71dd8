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

#include "rankadapt/dataset.h"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <numeric>
#include <sstream>
#include <string_view>
#include <unordered_map>
#include <unordered_set>

#include "rankadapt/error.h"
#include "rankadapt/random.h"

namespace rankadapt {
namespace {

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r\n");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r\n");
  return s.substr(first, last - first + 1);
}

[[noreturn]] void fail_at(std::size_t line, const std::string& what) {
  throw InvalidInput(what + " at line " + std::to_string(line));
}

template <typename T>
bool parse_number(std::string_view token, T& out) {
  const char* first = token.data();
  const char* last = token.data() + token.size();
  if (first != last && *first == '+') ++first;
  auto [ptr, ec] = std::from_chars(first, last, out);
  return ec == std::errc() && ptr == last;
}

struct PendingDocument {
  int label;
  std::vector<std::pair<std::size_t, double>> sparse;
};

}  // namespace

std::vector<int> Query::labels() const {
  std::vector<int> out;
  out.reserve(documents.size());
  for (const auto& d : documents) out.push_back(d.label);
  return out;
}

Dataset Dataset::make(std::vector<Query> queries, std::size_t feature_count,
                      std::vector<std::string> feature_names) {
  if (!feature_names.empty() && feature_names.size() != feature_count) {
    throw InvalidInput("feature_names has " +
                       std::to_string(feature_names.size()) +
                       " entries, expected " + std::to_string(feature_count));
  }
  std::unordered_set<std::string> seen;
  for (const auto& q : queries) {
    if (!seen.insert(q.qid).second) {
      throw InvalidInput("duplicate qid '" + q.qid + "'");
    }
    if (q.documents.empty()) {
      throw InvalidInput("query '" + q.qid + "' has no documents");
    }
    for (const auto& d : q.documents) {
      if (d.label < 0 || d.label > kMaxLabel) {
        throw InvalidInput("label out of range in query '" + q.qid + "'");
      }
      if (d.features.size() != feature_count) {
        throw InvalidInput("query '" + q.qid + "' has a document with " +
                           std::to_string(d.features.size()) +
                           " features, expected " +
                           std::to_string(feature_count));
      }
    }
  }
  Dataset out;
  out.queries_ = std::move(queries);
  out.feature_count_ = feature_count;
  out.feature_names_ = std::move(feature_names);
  return out;
}

std::size_t Dataset::document_count() const {
  std::size_t n = 0;
  for (const auto& q : queries_) n += q.size();
  return n;
}

Dataset parse_letor(std::istream& in) {
  std::vector<std::string> order;
  std::unordered_map<std::string, std::vector<PendingDocument>> groups;
  std::size_t max_fid = 0;
  std::size_t line_no = 0;
  std::string raw;

  while (std::getline(in, raw)) {
    ++line_no;
    std::string_view line(raw);
    if (auto hash = line.find('#'); hash != std::string_view::npos) {
      line = line.substr(0, hash);
    }
    line = trim(line);
    if (line.empty()) continue;

    std::vector<std::string_view> tokens;
    std::size_t pos = 0;
    while (pos < line.size()) {
      while (pos < line.size() && (line[pos] == ' ' || line[pos] == '\t')) {
        ++pos;
      }
      std::size_t end = pos;
      while (end < line.size() && line[end] != ' ' && line[end] != '\t') {
        ++end;
      }
      if (end > pos) tokens.push_back(line.substr(pos, end - pos));
      pos = end;
    }

    PendingDocument doc;
    if (!parse_number(tokens[0], doc.label)) {
      fail_at(line_no, "non-integer label");
    }
    if (doc.label < 0 || doc.label > kMaxLabel) {
      fail_at(line_no, "label out of range");
    }
    if (tokens.size() < 2 || tokens[1].substr(0, 4) != "qid:" ||
        tokens[1].size() == 4) {
      fail_at(line_no, "missing qid");
    }
    std::string qid(tokens[1].substr(4));

    for (std::size_t t = 2; t < tokens.size(); ++t) {
      const auto colon = tokens[t].find(':');
      if (colon == std::string_view::npos) {
        fail_at(line_no, "malformed feature '" + std::string(tokens[t]) + "'");
      }
      std::size_t fid = 0;
      double value = 0.0;
      if (!parse_number(tokens[t].substr(0, colon), fid) || fid == 0) {
        fail_at(line_no, "bad feature id '" + std::string(tokens[t]) + "'");
      }
      if (!parse_number(tokens[t].substr(colon + 1), value) ||
          !std::isfinite(value)) {
        fail_at(line_no, "unparsable value '" + std::string(tokens[t]) + "'");
      }
      max_fid = std::max(max_fid, fid);
      doc.sparse.emplace_back(fid, value);
    }

    auto [it, inserted] = groups.try_emplace(qid);
    if (inserted) order.push_back(qid);
    it->second.push_back(std::move(doc));
  }

  if (order.empty()) throw InvalidInput("empty dataset");

  std::vector<Query> queries;
  queries.reserve(order.size());
  for (const auto& qid : order) {
    Query q{qid, {}};
    for (auto& pending : groups[qid]) {
      Document d{pending.label, std::vector<double>(max_fid, 0.0)};
      for (auto [fid, value] : pending.sparse) d.features[fid - 1] = value;
      q.documents.push_back(std::move(d));
    }
    queries.push_back(std::move(q));
  }
  return Dataset::make(std::move(queries), max_fid);
}

Dataset parse_letor_string(const std::string& text) {
  std::istringstream in(text);
  return parse_letor(in);
}

Dataset read_letor_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InvalidInput("cannot open '" + path + "'");
  try {
    return parse_letor(in);
  } catch (const InvalidInput& e) {
    throw InvalidInput(path + ": " + e.what());
  }
}

std::string format_double(double value) {
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), value);
  return std::string(buf, ptr);
}

void write_letor(std::ostream& out, const Dataset& dataset) {
  for (const auto& q : dataset.queries()) {
    for (const auto& d : q.documents) {
      out << d.label << " qid:" << q.qid;
      for (std::size_t f = 0; f < d.features.size(); ++f) {
        out << ' ' << (f + 1) << ':' << format_double(d.features[f]);
      }
      out << '\n';
    }
  }
}

void write_letor_file(const std::string& path, const Dataset& dataset) {
  std::ofstream out(path);
  if (!out) throw InvalidInput("cannot write '" + path + "'");
  write_letor(out, dataset);
}

std::tuple<Dataset, Dataset, Dataset> split_dataset(const Dataset& dataset,
                                                    SplitFractions fractions,
                                                    uint64_t seed) {
  const double parts[3] = {fractions.train, fractions.valid, fractions.test};
  for (double p : parts) {
    if (!(p > 0.0)) throw InvalidInput("split fractions must be positive");
  }
  if (std::abs(parts[0] + parts[1] + parts[2] - 1.0) > 1e-9) {
    throw InvalidInput("split fractions must sum to 1");
  }
  const std::size_t n = dataset.query_count();
  if (n < 3) throw InvalidInput("split needs at least 3 queries");

  // Largest remainder: floor every quota, then hand the leftover queries to
  // the largest fractional parts (lower part index wins ties).
  std::size_t sizes[3];
  double remainders[3];
  std::size_t assigned = 0;
  for (int k = 0; k < 3; ++k) {
    const double quota = parts[k] * static_cast<double>(n);
    sizes[k] = static_cast<std::size_t>(std::floor(quota));
    remainders[k] = quota - std::floor(quota);
    assigned += sizes[k];
  }
  int by_remainder[3] = {0, 1, 2};
  std::stable_sort(std::begin(by_remainder), std::end(by_remainder),
                   [&](int a, int b) { return remainders[a] > remainders[b]; });
  for (int k = 0; assigned < n; k = (k + 1) % 3, ++assigned) {
    ++sizes[by_remainder[k]];
  }

  std::vector<std::size_t> perm(n);
  std::iota(perm.begin(), perm.end(), std::size_t{0});
  Rng rng(seed);
  rng.shuffle(std::span<std::size_t>(perm));

  std::vector<int> part_of(n);
  std::size_t cursor = 0;
  for (int k = 0; k < 3; ++k) {
    for (std::size_t c = 0; c < sizes[k]; ++c) part_of[perm[cursor++]] = k;
  }

  std::vector<Query> out[3];
  for (std::size_t i = 0; i < n; ++i) {
    out[part_of[i]].push_back(dataset.query(i));
  }
  const auto fc = dataset.feature_count();
  const auto& names = dataset.feature_names();
  return {Dataset::make(std::move(out[0]), fc, names),
          Dataset::make(std::move(out[1]), fc, names),
          Dataset::make(std::move(out[2]), fc, names)};
}

Dataset concat(std::span<const Dataset> parts) {
  std::vector<Query> queries;
  std::size_t fc = 0;
  for (const auto& part : parts) {
    if (!part.empty()) {
      fc = part.feature_count();
      break;
    }
  }
  for (const auto& part : parts) {
    if (!part.empty() && part.feature_count() != fc) {
      throw InvalidInput("cannot concatenate datasets with " +
                         std::to_string(fc) + " and " +
                         std::to_string(part.feature_count()) + " features");
    }
    for (const auto& q : part.queries()) queries.push_back(q);
  }
  return Dataset::make(std::move(queries), fc);
}

}  // namespace rankadapt
