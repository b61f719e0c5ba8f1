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

// Reachable sets in p-space as unions of segments parallel to the target
// axis: for each fixed value of the other coordinates one SDP gives the top
// of the segment, and the target coordinate can always be lowered from there.

#pragma once

#include <optional>
#include <string>
#include <vector>

#include "bilsdp/problem.hpp"
#include "bilsdp/sdp.hpp"

namespace bilsdp {

struct ReachSlice {
  Vector base;  // fixed non-target coordinates, in index order
  std::optional<double> p_target_max;  // empty when the slice is not reachable
  int solution_rank = 0;
  SolveStatus status = SolveStatus::numeric_failure;
  std::string diagnostics;

  bool feasible() const { return p_target_max.has_value(); }
};

/// One SDP: maximize p_target subject to the other coordinates ending at base.
ReachSlice reach_slice(const ProblemSpec& spec, const Vector& base, const SolverConfig& cfg = {});

struct ReachSet {
  std::vector<std::vector<double>> axes;  // one grid per non-target coordinate
  std::vector<ReachSlice> slices;         // grid order, last axis fastest
  double down_rate = 0.0;                 // dp_target/dt' under m = e_target, i.e. 2 a_tt
  bool segments_downward_closed = false;  // down_rate < 0

  std::size_t infeasible_count() const;
};

/// points per axis, evenly spaced over [0, max_i p0_i].
std::vector<std::vector<double>> default_axes(const ProblemSpec& spec, int points = 21);

/// Slices run concurrently on the given number of worker threads; results
/// are in grid order regardless of scheduling.
ReachSet reach_set(const ProblemSpec& spec, const std::vector<std::vector<double>>& axes, int workers = 1,
                   const SolverConfig& cfg = {});

}  // namespace bilsdp
