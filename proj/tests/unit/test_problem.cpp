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

#include <cmath>
#include <random>

#include "bilsdp/error.hpp"
#include "bilsdp/lowrank.hpp"
#include "bilsdp/problem.hpp"
#include "test_support.hpp"

using namespace bilsdp;

namespace {

void check_matrix(const SymMatrix& got, const SymMatrix& want) {
  REQUIRE(got.n() == want.n());
  for (std::size_t i = 0; i < got.n(); ++i)
    for (std::size_t j = 0; j < got.n(); ++j) CHECK(got(i, j) == want(i, j));
}

}  // namespace

TEST_CASE("validate accepts the two-state chain") {
  const ProblemSpec spec = ProblemSpec::make(Matrix{{-1, -1}, {1, -1}}, {1, 0}, 1);
  const ValidationReport r = validate(spec);
  CHECK(r.ok());
  CHECK(r.negative_definite);
  CHECK(r.irreducible);
  CHECK(r.max_symmetric_eigenvalue == doctest::Approx(-2.0));
}

TEST_CASE("validate rejects a decoupled system") {
  const ValidationReport r = validate(ProblemSpec::make(Matrix{{-1, 0}, {0, -1}}, {1, 0}, 1));
  CHECK_FALSE(r.ok());
  CHECK_FALSE(r.irreducible);
  CHECK(r.negative_definite);
  REQUIRE(r.messages.size() == 1);
  CHECK(r.messages[0].find("irreducible") != std::string::npos);
}

TEST_CASE("validate rejects a chain without dissipation") {
  std::mt19937_64 rng(4);
  std::uniform_real_distribution<double> mag(0.2, 2.0);
  Matrix a(5, 5);
  for (std::size_t i = 0; i + 1 < 5; ++i) {
    const double k = mag(rng);
    a(i, i + 1) = -k;
    a(i + 1, i) = k;
  }
  const ValidationReport r = validate(ProblemSpec::make(a, Vector(5, 0.5), 4));
  CHECK_FALSE(r.negative_definite);
  CHECK(r.irreducible);
  CHECK_FALSE(r.ok());
}

TEST_CASE("validate rejects negative p0 and weakly connected patterns") {
  CHECK_FALSE(validate(ProblemSpec::chain(2, 1.0, {1.0, -0.1})).nonnegative_p0);
  // One-way coupling 1 -> 2 only: weakly but not strongly connected.
  const ValidationReport r = validate(ProblemSpec::make(Matrix{{-1, 0}, {0.5, -1}}, {1, 0}, 1));
  CHECK_FALSE(r.irreducible);
}

TEST_CASE("validate is a pure predicate") {
  const ProblemSpec spec = ProblemSpec::chain(4, 0.3, {0.1, 0.2, 0.3, 0.4});
  const ValidationReport a = validate(spec);
  const ValidationReport b = validate(spec);
  CHECK(a.ok() == b.ok());
  CHECK(a.max_symmetric_eigenvalue == b.max_symmetric_eigenvalue);
  CHECK(a.messages == b.messages);
}

TEST_CASE("make rejects inconsistent shapes") {
  CHECK_THROWS_AS(ProblemSpec::make(Matrix{{-1, -1}, {1, -1}}, {1, 0, 0}, 1), InvalidInput);
  CHECK_THROWS_AS(ProblemSpec::make(Matrix(2, 3), {1, 0}, 1), InvalidInput);
  CHECK_THROWS_AS(ProblemSpec::make(Matrix{{-1, -1}, {1, -1}}, {1, 0}, 2), InvalidInput);
}

TEST_CASE("build_constraints for the three-state chain") {
  const ConstraintSet set = build_constraints(ProblemSpec::chain(3, 1.0, {1, 1, 0}));
  check_matrix(set.matrices[0], SymMatrix{{-2, -1, 0}, {-1, 0, 0}, {0, 0, 0}});
  check_matrix(set.matrices[1], SymMatrix{{0, 1, 0}, {1, -2, -1}, {0, -1, 0}});
  check_matrix(set.matrices[2], SymMatrix{{0, 0, 0}, {0, 0, 1}, {0, 1, -2}});
  CHECK(set.rhs == Vector{-1, -1, -0.0});
  CHECK(set.objective == 2);
}

TEST_CASE("build_constraints for the two-state chain") {
  const ConstraintSet set = build_constraints(ProblemSpec::chain(2, 1.0, {1, 0}));
  check_matrix(set.matrices[0], SymMatrix{{-2, -1}, {-1, 0}});
  check_matrix(set.matrices[1], SymMatrix{{0, 1}, {1, -2}});
}

TEST_CASE("constraint matrices sum to A + A^T") {
  for (std::size_t index = 0; index < 100; ++index) {
    const std::size_t n = 2 + index % 5;
    auto rng = instance_rng(99, n, index);
    const ProblemSpec spec = random_spec(n, rng);
    REQUIRE(validate(spec).ok());
    const SymMatrix sum = build_constraints(spec).sum();
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j) CHECK(sum(i, j) == spec.A(i, j) + spec.A(j, i));
  }
}

TEST_CASE("feasible_seed") {
  SUBCASE("two-state chain") {
    const SymMatrix seed = feasible_seed(ProblemSpec::chain(2, 1.0, {1, 0}));
    check_matrix(seed, SymMatrix{{0.5, 0}, {0, 0}});
  }
  SUBCASE("zero start") {
    const SymMatrix seed = feasible_seed(ProblemSpec::chain(3, 1.0, {0, 0, 0}));
    check_matrix(seed, SymMatrix(3));
  }
  SUBCASE("three-state chain satisfies every equation, the target included") {
    const ProblemSpec spec = ProblemSpec::chain(3, 1.0, {1, 1, 0});
    const SymMatrix seed = feasible_seed(spec);
    check_matrix(seed, SymMatrix{{0.5, 0, 0}, {0, 0.5, 0}, {0, 0, 0}});
    const ConstraintSet set = build_constraints(spec);
    for (std::size_t i = 0; i < 3; ++i) CHECK(trace_inner(set.matrices[i], seed) == doctest::Approx(-spec.p0[i]));
  }
  SUBCASE("random instances") {
    for (std::size_t index = 0; index < 50; ++index) {
      auto rng = instance_rng(5, 4, index);
      const ProblemSpec spec = random_spec(4, rng);
      const SymMatrix seed = feasible_seed(spec);
      const ConstraintSet set = build_constraints(spec);
      for (std::size_t i = 0; i < 4; ++i) {
        CHECK(seed(i, i) >= 0.0);
        CHECK(std::abs(trace_inner(set.matrices[i], seed) + spec.p0[i]) <= 1e-12);
      }
    }
  }
}

TEST_CASE("coordinate conversions") {
  CHECK(xy_to_r({{1, 0}, {0, 0}}).r == Vector{1, 0});
  CHECK(xy_to_r({{0, 0}, {0, 0}}).r == Vector{0, 0});
  CHECK(xy_to_r({{3, 0}, {4, 0}}).r == Vector{5, 0});
  CHECK(r_to_p({{1, 0}}) == Vector{1, 0});
  CHECK(std::abs(r_to_p({{0.5311}})[0] - 0.2821) <= 1e-4);
  CHECK_THROWS_AS(p_to_r({0.1, -1e-3}), InvalidInput);

  std::mt19937_64 rng(2);
  std::uniform_real_distribution<double> u(0.0, 3.0);
  for (int k = 0; k < 100; ++k) {
    Vector p(6);
    for (double& x : p) x = u(rng);
    const Vector back = r_to_p(p_to_r(p));
    for (std::size_t i = 0; i < p.size(); ++i) CHECK(std::abs(back[i] - p[i]) <= 1e-12);
  }
}

TEST_CASE("transfer bound sums the non-target coordinates") {
  CHECK(transfer_bound(ProblemSpec::chain(3, 1.0, {1, 0.5, 7})) == 1.5);
  const ProblemSpec spec = ProblemSpec::make(Matrix{{-1, -1}, {1, -1}}, {0.25, 2.0}, 0);
  CHECK(transfer_bound(spec) == 2.0);
}
