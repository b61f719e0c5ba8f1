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

// Integration of the three coordinate systems:
//
//   p-space   dp_i/dt' = sum_j 2 a_ij m_i m_j        (piecewise linear, exact)
//   r-space   dr_i/dt  = sum_j a_ij u_i u_j r_j      (closed loop)
//   xy-space  dx/dt = -V y,  dy/dt = V x + A y,  V = diag(v)
//
// Closed-loop runs also integrate the rescaled time t' with dt' = U^2 dt.

#pragma once

#include <functional>
#include <string>
#include <vector>

#include "bilsdp/linalg.hpp"
#include "bilsdp/problem.hpp"
#include "bilsdp/synthesis.hpp"

namespace bilsdp {

enum class SpaceTag { p, r, xy };
std::string to_string(SpaceTag tag);

enum class SimStatus {
  completed,         // horizon reached or schedule exhausted
  converged,         // t' reached the target fraction of the schedule length
  stationary,        // the state stopped moving
  numeric_failure,   // step size underflow or step budget exhausted
  singular_control,  // a zero-radius phase was asked to move
};
std::string to_string(SimStatus status);

struct Trajectory {
  SpaceTag space = SpaceTag::p;
  std::vector<double> times;
  std::vector<Vector> states;    // p, r, or (x_1..x_n, y_1..y_n)
  std::vector<Vector> controls;  // u for r-space, v for xy-space, empty for p-space
  Vector U;
  Vector tprime;
  SimStatus status = SimStatus::completed;
  std::string diagnostics;
  double min_coordinate = 0.0;  // p-space: smallest p_i over the trajectory

  std::size_t size() const { return times.size(); }
  bool negative_excursion(double tol = 1e-9) const { return min_coordinate < -tol; }
};

struct IntegratorConfig {
  double rtol = 1e-8;
  double atol = 1e-10;
  double max_step = 0.0;  // 0 selects horizon / 1000
  double min_step = 1e-14;
  long max_steps = 5'000'000;
  double tprime_fraction = 1e-4;  // stop once t' >= (1 - fraction) * T_f
  double stall_rate = 1e-12;
  double sample_interval = 0.0;   // > 0 forces steps to land on multiples of it
  double tracking_gain = 10.0;    // xy-space: pull the realized phase back onto the law
  double max_phase_rate = 1e4;    // xy-space: |v_i| bound
};

/// Exact in t': one sample per segment boundary, times are t'.
Trajectory simulate_p(const ControlSchedule& schedule, const Matrix& a, const Vector& p0);

Trajectory simulate_r(const FeedbackLaw& law, const Matrix& a, const RadialState& r0, double horizon,
                      const IntegratorConfig& cfg = {});

/// Closed loop: the phase controls are computed from the current state so
/// that y_i / r_i follows the feedback law.
Trajectory simulate_xy(const FeedbackLaw& law, const Matrix& a, const BilinearState& s0, double horizon,
                       const IntegratorConfig& cfg = {});

using PhaseControl = std::function<Vector(double t, const BilinearState& s)>;

/// Open loop: v = control(t, state).
Trajectory simulate_xy(const PhaseControl& control, const Matrix& a, const BilinearState& s0, double horizon,
                       const IntegratorConfig& cfg = {});

/// Cumulative trapezoid of U^2 over the recorded samples.
Vector rescaled_time(const Trajectory& traj);

/// r_i = |(x_i, y_i)| for every sample of an xy trajectory.
std::vector<Vector> radial_states(const Trajectory& xy);

/// Largest |r_a(t) - r_b(t)| over the sample times the two trajectories share.
/// Returns -1 when they share none.
double radial_sup_distance(const Trajectory& a, const Trajectory& b, double time_tol = 1e-12);

}  // namespace bilsdp
