// Copyright 2026 The bilsdp Authors
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "bilsdp/error.hpp"
#include "bilsdp/io.hpp"
#include "bilsdp/pipeline.hpp"

using namespace bilsdp;

TEST_CASE("parse an explicit problem") {
  const ProblemSpec s = parse_problem(R"({"A": [[-1, -1], [1, -1]], "p0": [1, 0], "label": "two"})");
  CHECK(s.n() == 2);
  CHECK(s.target == 1);
  CHECK(s.label == "two");
  CHECK(s.A(1, 0) == 1.0);
  const ProblemSpec t = parse_problem(R"({"A": [[-1, -1], [1, -1]], "p0": [0, 1], "target_index": 1})");
  CHECK(t.target == 0);
}

TEST_CASE("parse a chain shorthand") {
  const ProblemSpec s = parse_problem(R"({"chain": {"n": 3, "xi": 0.5}, "p0": [1, 0, 0]})");
  CHECK(s.A == ProblemSpec::chain(3, 0.5, {1, 0, 0}).A);
  CHECK(s.target == 2);
}

TEST_CASE("bad input is classified") {
  CHECK_THROWS_AS(parse_problem(R"({"A": [[-1, -1], [1, -1]], "p0": [1, )"), IoError);
  CHECK_THROWS_AS(parse_problem(R"({"A": [[-1, -1], [1, -1]], "p0": [1, 0, 0]})"), InvalidInput);
  CHECK_THROWS_AS(parse_problem(R"({"A": [[-1, -1], [1]], "p0": [1, 0]})"), InvalidInput);
  CHECK_THROWS_AS(parse_problem(R"({"A": [[-1, -1], [1, -1]], "p0": [1, 0], "target_index": 3})"), InvalidInput);
  CHECK_THROWS_AS(parse_problem(R"({"p0": [1, 0]})"), InvalidInput);
  CHECK_THROWS_AS(load_problem("/nonexistent/problem.json"), IoError);
}

TEST_CASE("number formatting") {
  CHECK(format_number(0.5) == "0.5");
  CHECK(format_number(1.0 / 3.0) == "0.333333333333");
  CHECK(format_number(-2.0) == "-2");
  CHECK(dump(json_number(0.1 + 0.2)) == "0.3\n");
}

TEST_CASE("report serialization is stable") {
  const RunReport rep = analyze(ProblemSpec::chain(2, 1.0, {1, 0}));
  const std::string a = dump(to_json(rep.schedule));
  const std::string b = dump(to_json(analyze(ProblemSpec::chain(2, 1.0, {1, 0})).schedule));
  CHECK(a == b);
  const Json spec = to_json(rep.spec);
  CHECK(parse_problem(spec.dump()).A == rep.spec.A);
}

TEST_CASE("reproduction table") {
  const auto rows = reproduce("all");
  CHECK(rows.size() >= 10);
  for (const auto& row : rows) {
    INFO(row.example << " " << row.quantity);
    CHECK(row.pass());
  }
  CHECK_THROWS_AS(reproduce("4x4"), InvalidInput);
}
