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

#include "bilsdp/lowrank.hpp"
#include "bilsdp/problem.hpp"
#include "bilsdp/sdp.hpp"
#include "test_support.hpp"

using namespace bilsdp;

namespace {

double max_residual(const SdpProblem& problem, const SymMatrix& m) {
  double worst = 0.0;
  for (double r : constraint_residuals(problem, m)) worst = std::max(worst, std::abs(r));
  return worst;
}

}  // namespace

TEST_CASE("two-state chain optimum") {
  const SdpProblem problem = make_sdp(ProblemSpec::chain(2, 1.0, {1, 0}));
  const SdpSolution sol = solve(problem);
  REQUIRE(sol.optimal());
  CHECK(std::abs(sol.objective_value - (3.0 - 2.0 * std::sqrt(2.0))) <= 1e-6);
  const CertReport cert = certify(problem, sol);
  CHECK(cert.pass());
  CHECK(cert.gap <= 1e-7);
}

TEST_CASE("zero start transfers nothing") {
  const SdpProblem problem = make_sdp(ProblemSpec::chain(3, 1.0, {0, 0, 0}));
  const SdpSolution sol = solve(problem);
  REQUIRE(sol.optimal());
  CHECK(std::abs(sol.objective_value) <= 1e-7);
  CHECK(testing::max_entry_diff(sol.M, SymMatrix(3)) <= 1e-6);
}

TEST_CASE("three-state chain optimum") {
  const SdpProblem problem = make_sdp(ProblemSpec::chain(3, 1.0, {1, 1, 0}));
  const SdpSolution sol = solve(problem);
  REQUIRE(sol.optimal());
  CHECK(std::abs(sol.objective_value - 0.2821) <= 1e-3);
  const CertReport cert = certify(problem, sol);
  CHECK(cert.pass());
  CHECK(cert.gap <= 1e-7);
  const SymMatrix m = rank_reduce(problem, sol.M).M;
  const double printed[3][3] = {{0.1775, 0.3225, 0.1304}, {0.3225, 0.5856, 0.2368}, {0.1304, 0.2368, 0.0958}};
  for (std::size_t i = 0; i < 3; ++i)
    for (std::size_t j = 0; j < 3; ++j) CHECK(std::abs(m(i, j) - printed[i][j]) <= 2e-3);
}

TEST_CASE("certify flags a violated constraint") {
  const SdpProblem problem = make_sdp(ProblemSpec::chain(3, 1.0, {1, 1, 0}));
  SdpSolution sol = solve(problem);
  REQUIRE(sol.optimal());
  // Shift M along a direction that changes only constraint 0 by exactly 1.
  SymMatrix bump(3);
  bump.set(0, 0, -0.5);
  sol.M += bump;
  const CertReport cert = certify(problem, sol);
  CHECK_FALSE(cert.pass());
  REQUIRE(cert.violated_constraints.size() == 1);
  CHECK(cert.violated_constraints[0] == 0);
  CHECK(std::abs(cert.residuals[0] - 1.0) <= 1e-6);
}

TEST_CASE("the diagonal seed is feasible but not optimal") {
  const ProblemSpec spec = ProblemSpec::chain(3, 1.0, {1, 1, 0});
  const SdpProblem problem = make_sdp(spec);
  const SdpSolution opt = solve(problem);
  SdpSolution seed;
  seed.M = feasible_seed(spec);
  seed.dual_y = opt.dual_y;
  seed.objective_value = trace_inner(problem.objective, seed.M);
  seed.status = SolveStatus::optimal;
  CHECK(seed.objective_value == doctest::Approx(-spec.p0[2]));
  const CertReport cert = certify(problem, seed);
  CHECK(cert.primal_feasible);
  CHECK_FALSE(cert.gap_ok);
  CHECK_FALSE(cert.pass());
}

TEST_CASE("random instances solve to certified optima within the transfer bound") {
  for (std::size_t index = 0; index < 100; ++index) {
    const std::size_t n = 2 + index % 5;
    auto rng = instance_rng(2024, n, index);
    const ProblemSpec spec = random_spec(n, rng);
    const SdpProblem problem = make_sdp(spec);
    const SdpSolution sol = solve(problem);
    REQUIRE(sol.optimal());
    CHECK(sol.objective_value <= transfer_bound(spec) + 1e-7);
    CHECK(sol.objective_value >= trace_inner(problem.objective, feasible_seed(spec)) - 1e-9);
    CHECK(max_residual(problem, sol.M) <= 1e-8);
    CHECK(certify(problem, sol).pass());
  }
}

TEST_CASE("optimum is invariant under rescaling of A") {
  for (std::size_t index = 0; index < 20; ++index) {
    const std::size_t n = 2 + index % 4;
    auto rng = instance_rng(31, n, index);
    const ProblemSpec spec = random_spec(n, rng);
    const double base = solve(make_sdp(spec)).objective_value;
    for (double c : {0.5, 2.0}) {
      const ProblemSpec scaled = ProblemSpec::make(spec.A * c, spec.p0, spec.target);
      const SdpSolution sol = solve(make_sdp(scaled));
      REQUIRE(sol.optimal());
      CHECK(std::abs(sol.objective_value - base) <= 1e-7);
    }
  }
}

TEST_CASE("unbounded programs are detected") {
  // maximize tr(M) subject to M_11 = 1: no upper bound.
  SdpProblem problem;
  problem.objective = SymMatrix::identity(2);
  problem.constraints = {SymMatrix{{1, 0}, {0, 0}}};
  problem.rhs = {1.0};
  problem.objective_bound = 1.0;
  const SdpSolution sol = solve(problem);
  CHECK(sol.status == SolveStatus::unbounded_detected);
}

TEST_CASE("infeasible programs are detected") {
  // M_11 = -1 has no PSD solution.
  SdpProblem problem;
  problem.objective = SymMatrix(2);
  problem.constraints = {SymMatrix{{1, 0}, {0, 0}}};
  problem.rhs = {-1.0};
  const SdpSolution sol = solve(problem);
  CHECK(sol.status == SolveStatus::infeasible_detected);
}

TEST_CASE("iteration cap is reported as a status") {
  SolverConfig cfg;
  cfg.max_iter = 2;
  const SdpSolution sol = solve(make_sdp(ProblemSpec::chain(3, 1.0, {1, 1, 0})), cfg);
  CHECK(sol.status == SolveStatus::max_iterations);
  CHECK_FALSE(sol.diagnostics.empty());
}

TEST_CASE("solve rejects non-conforming problems") {
  SdpProblem problem;
  problem.objective = SymMatrix::identity(2);
  problem.constraints = {SymMatrix::identity(3)};
  problem.rhs = {1.0};
  CHECK_THROWS(solve(problem));
}
