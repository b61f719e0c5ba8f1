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

// Dense primal-dual interior-point solver for
//
//   maximize <C, M>  subject to  <A_i, M> = b_i,  M >= 0
//   minimize b^T y   subject to  Z = sum_i y_i A_i - C >= 0
//
// using Nesterov-Todd scaling and Mehrotra predictor-corrector steps.

#pragma once

#include <optional>
#include <string>
#include <vector>

#include "bilsdp/linalg.hpp"
#include "bilsdp/problem.hpp"

namespace bilsdp {

struct SdpProblem {
  SymMatrix objective;
  std::vector<SymMatrix> constraints;
  Vector rhs;
  // Known a priori upper bound on the optimum (the transfer bound for
  // instances built from a ProblemSpec). Enables unboundedness detection.
  std::optional<double> objective_bound;

  std::size_t n() const { return objective.n(); }
  std::size_t num_constraints() const { return constraints.size(); }
};

/// max <A_target, M> s.t. <A_i, M> = -p0_i for every i != target.
SdpProblem make_sdp(const ProblemSpec& spec);
/// max <A_target, M> s.t. <A_i, M> = base_i - p0_i for i != target, where
/// `base` lists the fixed non-target coordinates in index order.
SdpProblem make_slice_sdp(const ProblemSpec& spec, const Vector& base);

struct SolverConfig {
  double gap_tol = 1e-8;
  double feas_tol = 1e-8;
  int max_iter = 200;
  double step_fraction = 0.98;
  int stall_window = 20;
  double degenerate_delta = 1e-10;
  bool verbose = false;
};

enum class SolveStatus { optimal, max_iterations, numeric_failure, infeasible_detected, unbounded_detected };

std::string to_string(SolveStatus status);

struct SdpSolution {
  SymMatrix M;
  Vector dual_y;
  SymMatrix dual_slack;  // Z
  double objective_value = 0.0;
  double dual_objective = 0.0;
  double gap = 0.0;  // relative duality gap
  double primal_residual = 0.0;
  double dual_residual = 0.0;
  int iterations = 0;
  SolveStatus status = SolveStatus::numeric_failure;
  bool perturbed = false;  // zero right-hand sides were replaced by -delta
  std::string diagnostics;

  bool optimal() const { return status == SolveStatus::optimal; }
};

/// Never throws on solver trouble; the status field carries the outcome.
/// Throws InvalidInput on non-conforming dimensions.
SdpSolution solve(const SdpProblem& problem, const SolverConfig& cfg = {});

struct CertConfig {
  double psd_floor = 1e-9;     // min eigenvalue of M, absolute
  double dual_floor = 1e-7;    // min eigenvalue of Z, relative to 1 + |C|
  double residual_tol = 1e-8;  // constraint residuals, relative to 1 + |b|
  double gap_tol = 1e-7;
  double bound_tol = 1e-7;
};

struct CertReport {
  double min_eig_M = 0.0;
  double min_eig_Z = 0.0;
  Vector residuals;  // <A_i, M> - b_i
  double complementarity = 0.0;  // <M, Z>
  double gap = 0.0;
  std::optional<double> bound_slack;  // bound - objective
  std::vector<std::size_t> violated_constraints;
  bool primal_feasible = false;
  bool dual_feasible = false;
  bool gap_ok = false;
  bool bound_ok = true;
  std::vector<std::string> failures;

  bool pass() const { return primal_feasible && dual_feasible && gap_ok && bound_ok; }
};

/// Recomputes the optimality certificate from (M, y) alone.
CertReport certify(const SdpProblem& problem, const SdpSolution& sol, const CertConfig& cfg = {});

/// <A_i, M> - b_i for every constraint.
Vector constraint_residuals(const SdpProblem& problem, const SymMatrix& m);

}  // namespace bilsdp
