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

// From an optimal M to executable controls: a piecewise-constant schedule of
// unit directions in rescaled time, the radial feedback law that follows a
// direction, and the phase controls of the bilinear system.

#pragma once

#include <cstddef>
#include <vector>

#include "bilsdp/linalg.hpp"
#include "bilsdp/problem.hpp"

namespace bilsdp {

struct ScheduleSegment {
  double duration = 0.0;  // in rescaled time t'
  Vector direction;       // unit vector, largest-magnitude entry positive
};

struct ControlSchedule {
  std::vector<ScheduleSegment> segments;  // the full, repeated sequence
  int repetitions = 1;
  double total_duration = 0.0;

  bool empty() const { return segments.empty(); }
  /// Sum of duration * m m^T over all segments.
  SymMatrix reconstruct(std::size_t n) const;
};

/// Positive eigenpairs of m, each run for lambda_k / n_reps, the cycle
/// repeated n_reps times. Eigenvalues below rel_tol * lambda_max are dropped.
ControlSchedule schedule_from_solution(const SymMatrix& m, int n_reps, double rel_tol = 1e-12);

struct RepetitionChoice {
  int repetitions = 1;
  bool satisfied = true;  // false when the cap was reached with a dip still present
  double min_coordinate = 0.0;
};

/// Smallest power of two N <= cap whose schedule keeps every p_i >= -1e-9.
RepetitionChoice choose_repetitions(const SymMatrix& m, const ProblemSpec& spec, int cap = 4096);

struct FeedbackSegment {
  std::size_t pivot = 0;  // argmax |m_i|
  Vector ratios;          // s_i = m_i / m_pivot
  double tprime_end = 0.0;
};

struct FeedbackLaw {
  std::vector<FeedbackSegment> segments;
  double total_duration = 0.0;

  std::size_t n() const { return segments.empty() ? 0 : segments.front().ratios.size(); }
  /// Index of the segment active at rescaled time tp; segments.size() once
  /// the schedule is exhausted.
  std::size_t segment_at(double tprime) const;
};

FeedbackLaw feedback_law(const ControlSchedule& schedule);

/// u with u_i r_i parallel to the segment direction and max |u_i| = 1.
/// Returns zeros when a required radius vanishes (stationary state).
Vector feedback_controls(const FeedbackSegment& seg, const RadialState& r);

/// True when feedback_controls would return the stationary zero vector.
bool is_stationary(const FeedbackSegment& seg, const RadialState& r);

/// dr_i/dt = sum_j a_ij u_i u_j r_j.
Vector radial_rates(const Matrix& a, const Vector& u, const RadialState& r);

/// Time derivative of feedback_controls along rdot. With k the active argmax
/// index, du_i/dt = u_i (rdot_k / r_k - rdot_i / r_i).
Vector feedback_rates(const FeedbackSegment& seg, const RadialState& r, const Vector& rdot);

/// Replace every zero radius with a nonzero ratio in some segment by eps.
RadialState epsilon_kick(const RadialState& r0, const FeedbackLaw& law, double eps);
/// 1e-3 * max_i r_i.
double default_kick(const RadialState& r0);

/// Phase controls of the bilinear system realizing u(t):
///   v_i = -dphi_i/dt - (rdot_i / r_i) tan(phi_i),  phi_i = arccos(u_i),
/// with |u_i| clamped to 1 - 1e-12. Throws SingularControl when r_i = 0 and
/// u_dot_i != 0.
Vector physical_controls(const Vector& u, const RadialState& r, const Vector& u_dot, const Matrix& a);

/// Bilinear state with the phases the law prescribes: y_i = u_i r_i,
/// x_i = r_i sqrt(1 - u_i^2).
BilinearState bilinear_state_from_law(const Vector& u, const RadialState& r);

}  // namespace bilsdp
