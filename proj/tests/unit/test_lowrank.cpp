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

#include "bilsdp/lowrank.hpp"
#include "bilsdp/problem.hpp"
#include "bilsdp/sdp.hpp"
#include "test_support.hpp"

using namespace bilsdp;

TEST_CASE("numerical_rank") {
  CHECK(numerical_rank(SymMatrix(3)) == 0);
  const SymMatrix printed{{0.1775, 0.3225, 0.1304}, {0.3225, 0.5856, 0.2368}, {0.1304, 0.2368, 0.0958}};
  // The printed entries carry 4 decimals, so the trailing eigenvalues are ~1e-4.
  CHECK(numerical_rank(printed, 1e-3) == 1);
  const SymMatrix exact = rank_reduce(make_sdp(ProblemSpec::chain(3, 1.0, {1, 1, 0})),
                                      solve(make_sdp(ProblemSpec::chain(3, 1.0, {1, 1, 0}))).M)
                              .M;
  CHECK(numerical_rank(exact, 1e-6) == 1);

  std::mt19937_64 rng(9);
  std::normal_distribution<double> normal;
  for (int trial = 0; trial < 20; ++trial) {
    Vector v1(5), v2(5);
    for (auto& x : v1) x = normal(rng);
    for (auto& x : v2) x = normal(rng);
    CHECK(numerical_rank(SymMatrix::outer(v1) + SymMatrix::outer(v2)) == 2);
  }
}

TEST_CASE("general rank bound") {
  CHECK(general_rank_bound(1) == 1);
  CHECK(general_rank_bound(2) == 1);
  CHECK(general_rank_bound(3) == 2);
  CHECK(general_rank_bound(5) == 2);
  CHECK(general_rank_bound(6) == 3);
  for (std::size_t k = 1; k < 200; ++k) {
    const int r = general_rank_bound(k);
    CHECK(static_cast<std::size_t>(r * (r + 1) / 2) <= k);
    CHECK(static_cast<std::size_t>((r + 1) * (r + 2) / 2) > k);
  }
}

TEST_CASE("rank_bound rules") {
  const RankBoundReport two = rank_bound(ProblemSpec::chain(2, 1.0, {1, 0}));
  CHECK(two.special_bound == 1);
  CHECK(two.applicable_rule == RankRule::two_state);

  const RankBoundReport three = rank_bound(ProblemSpec::chain(3, 1.0, {1, 1, 0}));
  CHECK(three.special_bound == 1);
  CHECK(three.general_bound == 2);
  CHECK(three.applicable_rule == RankRule::three_state);

  const RankBoundReport five = rank_bound(ProblemSpec::chain(5, 1.0, {1, 1, 1, 1, 0}));
  CHECK(five.special_bound == 2);
  CHECK(five.general_bound == 2);
  CHECK(five.best() == 2);

  auto rng = instance_rng(1, 6, 0);
  const RankBoundReport dense = rank_bound(random_spec(6, rng));
  CHECK(dense.general_bound == 3);
  CHECK(dense.best() == 3);
}

TEST_CASE("band width") {
  CHECK(band_width(Matrix{{-1, 0}, {0, -1}}) == 1);
  CHECK(band_width(ProblemSpec::chain(4, 1.0, {1, 0, 0, 0}).A) == 2);
  Matrix a(4, 4);
  a(0, 3) = 1.0;
  CHECK(band_width(a) == 4);
}

TEST_CASE("rank-one input is returned unchanged") {
  const SdpProblem problem = make_sdp(ProblemSpec::chain(2, 1.0, {1, 0}));
  const SymMatrix m = rank_reduce(problem, solve(problem).M).M;
  const RankReduction again = rank_reduce(problem, m);
  CHECK(again.initial_rank == 1);
  CHECK(again.final_rank == 1);
  CHECK(again.steps == 0);
  CHECK(testing::max_entry_diff(again.M, m) <= 1e-9);
}

TEST_CASE("a loose interior solve of the three-state chain reduces to rank one") {
  const SdpProblem problem = make_sdp(ProblemSpec::chain(3, 1.0, {1, 1, 0}));
  SolverConfig cfg;
  cfg.gap_tol = 1e-5;
  const SdpSolution sol = solve(problem, cfg);
  REQUIRE(sol.optimal());
  CHECK(numerical_rank(sol.M, 1e-8) >= 2);
  const RankReduction red = rank_reduce(problem, sol.M);
  CHECK(red.final_rank == 1);
  CHECK(std::abs(trace_inner(problem.objective, red.M) - 0.2821) <= 1e-3);
  CHECK(red.final_rank <= red.initial_rank);
}

TEST_CASE("reduction respects the proven bounds and keeps the objective") {
  for (std::size_t n = 2; n <= 6; ++n) {
    for (std::size_t index = 0; index < 20; ++index) {
      auto rng = instance_rng(404, n, index);
      const ProblemSpec spec = random_spec(n, rng);
      const SdpProblem problem = make_sdp(spec);
      const SdpSolution sol = solve(problem);
      REQUIRE(sol.optimal());
      const RankReduction red = rank_reduce(problem, sol.M);
      CHECK(red.final_rank <= rank_bound(spec).best());
      CHECK(red.objective_drift <= 1e-7);
      CHECK(red.max_residual <= 1e-7);
      // Fixpoint: no kernel may be left once r(r+1)/2 exceeds the equation count.
      const int r = red.final_rank;
      CHECK(static_cast<std::size_t>(r * (r + 1) / 2) <= problem.num_constraints() + 1);

      // Trace bound from <B, M> = sum_{i<n} p0_i - E with B = -(A + A^T).
      const SymMatrix b = SymMatrix::symmetric_part(spec.A) * -2.0;
      const double lmin = spectral_decompose(b).min_eigenvalue();
      const double rhs = (transfer_bound(spec) - sol.objective_value) / lmin;
      CHECK(red.M.trace() <= rhs + 1e-6);
      CHECK(sol.M.trace() <= rhs + 1e-6);
    }
  }
}

TEST_CASE("tridiagonal instances reduce to rank at most two") {
  for (std::size_t index = 0; index < 20; ++index) {
    auto rng = instance_rng(77, 5, index);
    const ProblemSpec spec = random_tridiagonal_spec(5, rng);
    REQUIRE(validate(spec).ok());
    const SdpProblem problem = make_sdp(spec);
    const RankReduction red = rank_reduce(problem, solve(problem).M);
    CHECK(red.final_rank <= 2);
  }
}

TEST_CASE("conjecture probe") {
  const ProbeReport small = conjecture_probe(50, 2, 3, 17, 2);
  REQUIRE(small.dimensions.size() == 2);
  for (const auto& d : small.dimensions) {
    CHECK(d.failures == 0);
    CHECK(d.rank_one_fraction == 1.0);
    CHECK(d.bound_violations == 0);
  }
  const ProbeReport five = conjecture_probe(50, 5, 5, 17, 4);
  REQUIRE(five.dimensions.size() == 1);
  CHECK(five.dimensions[0].solved + five.dimensions[0].failures == 50);
  CHECK(five.dimensions[0].bound_violations == 0);
  CHECK(five.dimensions[0].rank_one_fraction >= 0.0);
  CHECK(five.dimensions[0].rank_one_fraction <= 1.0);
}

TEST_CASE("probe results do not depend on the worker count") {
  const ProbeReport one = conjecture_probe(12, 4, 5, 3, 1);
  const ProbeReport many = conjecture_probe(12, 4, 5, 3, 5);
  REQUIRE(one.instances.size() == many.instances.size());
  for (std::size_t i = 0; i < one.instances.size(); ++i) {
    CHECK(one.instances[i].final_rank == many.instances[i].final_rank);
    CHECK(one.instances[i].objective == many.instances[i].objective);
  }
}
