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

// Rank of optimal SDP solutions: numerical rank, a priori bounds, and a
// constructive reduction that walks inside the optimal face until no
// rank-decreasing feasible direction is left.

#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "bilsdp/linalg.hpp"
#include "bilsdp/problem.hpp"
#include "bilsdp/sdp.hpp"

namespace bilsdp {

/// Number of eigenvalues >= rel_tol * max(lambda_max, 1e-300).
int numerical_rank(const SymMatrix& m, double rel_tol = 1e-8);

/// floor((sqrt(8k+1) - 1) / 2): the largest r with r(r+1)/2 <= k.
int general_rank_bound(std::size_t k);

/// 1 + the largest |i - j| with a_ij != 0 (1 for a diagonal matrix).
int band_width(const Matrix& a);

enum class RankRule { general, two_state, three_state, banded };
std::string to_string(RankRule rule);

struct RankBoundReport {
  std::size_t n = 0;
  int general_bound = 0;
  std::optional<int> special_bound;
  RankRule applicable_rule = RankRule::general;

  int best() const { return special_bound ? std::min(*special_bound, general_bound) : general_bound; }
};

RankBoundReport rank_bound(const ProblemSpec& spec);

struct ReduceConfig {
  double rank_tol = 1e-6;    // relative eigenvalue cut for the working range
  double drift_tol = 1e-8;   // accepted objective drift for rank-one completion
  double kernel_tol = 1e-7;  // relative singular value treated as zero
  double max_condition = 1e12;
  bool try_rank_one = true;
};

struct RankReduction {
  SymMatrix M;
  int initial_rank = 0;
  int final_rank = 0;
  int steps = 0;
  double objective_drift = 0.0;  // |<C, M_out> - <C, M_in>|
  double max_residual = 0.0;     // max |<A_i, M_out> - b_i|
  bool rank_one_completion = false;
};

/// Requires `m` feasible and optimal for `problem`. The objective value is
/// held fixed as an extra equality while moving along directions V S V^T in
/// the range of m. Throws NumericFailure when the working range is
/// conditioned beyond cfg.max_condition.
RankReduction rank_reduce(const SdpProblem& problem, const SymMatrix& m, const ReduceConfig& cfg = {});

/// Random instance with A + A^T negative definite and a dense (hence
/// irreducible) off-diagonal pattern; p0 uniform in [0, 1]^n.
ProblemSpec random_spec(std::size_t n, std::mt19937_64& rng);
/// Random tridiagonal instance with nonzero couplings in both directions.
ProblemSpec random_tridiagonal_spec(std::size_t n, std::mt19937_64& rng);
/// Stream for instance `index` at dimension `n`, independent of scheduling.
std::mt19937_64 instance_rng(std::uint64_t seed, std::size_t n, std::size_t index);

struct ProbeInstance {
  std::size_t n = 0;
  std::size_t index = 0;
  bool solved = false;
  int rank_before = 0;
  int final_rank = 0;
  double objective = 0.0;
  double objective_drift = 0.0;
  double gap = 0.0;           // relative duality gap of the solver output
  double max_residual = 0.0;  // max |<A_i, M> - b_i| of the solver output
  double bound_slack = 0.0;   // transfer bound minus objective
  bool certified = false;
  std::string failure;
};

struct ProbeDimension {
  std::size_t n = 0;
  std::map<int, int> rank_histogram;
  int solved = 0;
  int failures = 0;
  int bound_violations = 0;  // final rank above the proven bound (must stay 0)
  double max_drift = 0.0;
  double rank_one_fraction = 0.0;
};

struct ProbeReport {
  std::uint64_t seed = 0;
  int count = 0;
  std::vector<ProbeDimension> dimensions;
  std::vector<ProbeInstance> instances;
};

ProbeReport conjecture_probe(int count, std::size_t n_min, std::size_t n_max, std::uint64_t seed, int workers = 1,
                             bool tridiagonal = false);

}  // namespace bilsdp
