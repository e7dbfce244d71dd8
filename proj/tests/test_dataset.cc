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

#include <doctest.h>

#include <set>
#include <sstream>

#include "fixtures.h"
#include "rankadapt/dataset.h"
#include "rankadapt/error.h"

namespace rankadapt {
namespace {

std::string error_of(const std::string& text) {
  try {
    parse_letor_string(text);
  } catch (const InvalidInput& e) {
    return e.what();
  }
  return "";
}

std::set<std::string> qids(const Dataset& d) {
  std::set<std::string> out;
  for (const auto& q : d.queries()) out.insert(q.qid);
  return out;
}

TEST_CASE("parse_letor densifies sparse features") {
  const auto d = parse_letor_string("2 qid:1 1:0.5 3:1.0");
  REQUIRE(d.query_count() == 1);
  CHECK(d.feature_count() == 3);
  const auto& doc = d.query(0).documents.at(0);
  CHECK(doc.label == 2);
  CHECK(doc.features == std::vector<double>{0.5, 0.0, 1.0});
}

TEST_CASE("parse_letor groups by qid in first-appearance order") {
  const auto d = parse_letor_string(
      "# header comment\n"
      "1 qid:b 1:1\r\n"
      "0 qid:a 2:3 # trailing comment\n"
      "\n"
      "4 qid:b 1:2\n");
  REQUIRE(d.query_count() == 2);
  CHECK(d.query(0).qid == "b");
  CHECK(d.query(0).labels() == std::vector<int>{1, 4});
  CHECK(d.query(1).qid == "a");
  CHECK(d.query(1).documents[0].features == std::vector<double>{0.0, 3.0});
}

TEST_CASE("parse_letor errors carry the line number") {
  CHECK(error_of("") == "empty dataset");
  CHECK(error_of("# only a comment\n") == "empty dataset");
  CHECK(error_of("5 qid:1 1:0.5") == "label out of range at line 1");
  CHECK(error_of("-1 qid:1 1:0.5") == "label out of range at line 1");
  CHECK(error_of("1 qid:1 1:0.5\nx qid:1 1:1") ==
        "non-integer label at line 2");
  CHECK(error_of("1.5 qid:1 1:0.5") == "non-integer label at line 1");
  CHECK(error_of("1 1:0.5") == "missing qid at line 1");
  CHECK(error_of("1 qid: 1:0.5") == "missing qid at line 1");
  CHECK(error_of("1 qid:1 1:abc").find("unparsable value") == 0);
  CHECK(error_of("1 qid:1 0:1.0").find("bad feature id") == 0);
  CHECK(error_of("1 qid:1 nocolon").find("malformed feature") == 0);
}

TEST_CASE("LETOR round trip reproduces the dataset") {
  for (uint64_t seed = 1; seed <= 5; ++seed) {
    const auto original = testing::random_dataset(seed, 12, 8, 6);
    std::ostringstream out;
    write_letor(out, original);
    CHECK(parse_letor_string(out.str()) == original);
  }
}

TEST_CASE("Dataset::make rejects broken invariants") {
  using testing::make_query;
  CHECK_THROWS_AS(
      Dataset::make({make_query("a", {1}), make_query("a", {2})}, 1),
      InvalidInput);
  CHECK_THROWS_AS(Dataset::make({Query{"a", {}}}, 1), InvalidInput);
  CHECK_THROWS_AS(Dataset::make({make_query("a", {1}, 2)}, 3), InvalidInput);
}

TEST_CASE("split_dataset partitions at query granularity") {
  const auto data = testing::random_dataset(11, 10, 5, 2);
  const auto [train, valid, test] = split_dataset(data, {0.8, 0.1, 0.1}, 7);
  CHECK(train.query_count() == 8);
  CHECK(valid.query_count() == 1);
  CHECK(test.query_count() == 1);

  const auto a = qids(train), b = qids(valid), c = qids(test);
  for (const auto& q : b) CHECK(a.count(q) == 0);
  for (const auto& q : c) CHECK((a.count(q) == 0 && b.count(q) == 0));

  const auto again = split_dataset(data, {0.8, 0.1, 0.1}, 7);
  CHECK(std::get<0>(again) == train);
  CHECK(std::get<1>(again) == valid);
  CHECK(std::get<2>(again) == test);
}

TEST_CASE("split_dataset covers every query exactly once") {
  const auto data = testing::random_dataset(3, 100, 4, 2);
  const auto [train, valid, test] = split_dataset(data, {0.5, 0.25, 0.25}, 3);
  CHECK(train.query_count() == 50);
  CHECK(valid.query_count() == 25);
  CHECK(test.query_count() == 25);
  std::multiset<std::string> all;
  for (const Dataset* part : {&train, &valid, &test}) {
    for (const auto& q : part->queries()) all.insert(q.qid);
  }
  CHECK(all.size() == 100);
  CHECK(std::set<std::string>(all.begin(), all.end()) == qids(data));
}

TEST_CASE("split_dataset largest remainder sums exactly") {
  const auto data = testing::random_dataset(5, 7, 3, 1);
  const auto [a, b, c] = split_dataset(data, {0.5, 0.3, 0.2}, 1);
  // quotas 3.5 / 2.1 / 1.4 -> floors 3/2/1, leftover to the 0.5 remainder.
  CHECK(a.query_count() == 4);
  CHECK(b.query_count() == 2);
  CHECK(c.query_count() == 1);
}

TEST_CASE("split_dataset validation") {
  const auto small = testing::random_dataset(1, 2, 3, 1);
  CHECK_THROWS_AS(split_dataset(small, {0.5, 0.25, 0.25}, 0), InvalidInput);
  const auto data = testing::random_dataset(1, 10, 3, 1);
  CHECK_THROWS_AS(split_dataset(data, {0.5, 0.5, 0.0}, 0), InvalidInput);
  CHECK_THROWS_AS(split_dataset(data, {0.5, 0.3, 0.3}, 0), InvalidInput);
}

}  // namespace
}  // namespace rankadapt
