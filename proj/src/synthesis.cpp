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

#include "bilsdp/synthesis.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "bilsdp/error.hpp"
#include "bilsdp/lowrank.hpp"
#include "bilsdp/simulate.hpp"

namespace bilsdp {

namespace {

constexpr double kRatioFloor = 1e-14;
constexpr double kUnitClamp = 1.0 - 1e-12;

std::size_t argmax_abs(const Vector& v) {
  std::size_t k = 0;
  for (std::size_t i = 1; i < v.size(); ++i)
    if (std::abs(v[i]) > std::abs(v[k])) k = i;
  return k;
}

// q_i = s_i r_pivot / r_i, or empty when the state is stationary.
bool pivot_quotients(const FeedbackSegment& seg, const RadialState& r, Vector& q) {
  const std::size_t n = seg.ratios.size();
  if (r.n() != n) throw InvalidInput("feedback: state dimension does not match the law");
  const double rp = r.r[seg.pivot];
  if (!(rp > 0.0)) return false;
  q.assign(n, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    if (seg.ratios[i] == 0.0) continue;
    if (!(r.r[i] > 0.0)) return false;
    q[i] = seg.ratios[i] * rp / r.r[i];
  }
  return true;
}

}  // namespace

SymMatrix ControlSchedule::reconstruct(std::size_t n) const {
  SymMatrix out(n);
  for (const auto& seg : segments) out += SymMatrix::outer(seg.direction) * seg.duration;
  return out;
}

ControlSchedule schedule_from_solution(const SymMatrix& m, int n_reps, double rel_tol) {
  if (n_reps < 1) throw InvalidInput("schedule: repetitions must be at least 1");
  ControlSchedule sched;
  sched.repetitions = n_reps;
  const SpectralDecomposition eig = spectral_decompose(m);
  const double lmax = eig.max_eigenvalue();
  if (!(lmax > 0.0)) return sched;

  std::vector<ScheduleSegment> cycle;
  for (std::size_t k = 0; k < eig.eigenvalues.size(); ++k) {
    if (!(eig.eigenvalues[k] > rel_tol * lmax)) continue;
    cycle.push_back({eig.eigenvalues[k] / n_reps, eig.vector(k)});
  }
  sched.segments.reserve(cycle.size() * static_cast<std::size_t>(n_reps));
  for (int rep = 0; rep < n_reps; ++rep)
    for (const auto& seg : cycle) {
      sched.segments.push_back(seg);
      sched.total_duration += seg.duration;
    }
  return sched;
}

RepetitionChoice choose_repetitions(const SymMatrix& m, const ProblemSpec& spec, int cap) {
  if (cap < 1) throw InvalidInput("choose_repetitions: cap must be at least 1");
  RepetitionChoice choice;
  auto lowest = [&](int reps) {
    const Trajectory traj = simulate_p(schedule_from_solution(m, reps), spec.A, spec.p0);
    double lo = traj.states.front().empty() ? 0.0 : traj.states.front().front();
    for (const auto& s : traj.states)
      for (double p : s) lo = std::min(lo, p);
    return lo;
  };
  if (numerical_rank(m, 1e-9) <= 1) {
    choice.min_coordinate = lowest(1);
    return choice;
  }
  for (int reps = 1; reps <= cap; reps *= 2) {
    choice.repetitions = reps;
    choice.min_coordinate = lowest(reps);
    if (choice.min_coordinate >= -1e-9) return choice;
    if (reps > cap / 2) break;
  }
  if (choice.repetitions != cap) {
    choice.repetitions = cap;
    choice.min_coordinate = lowest(cap);
  }
  choice.satisfied = choice.min_coordinate >= -1e-9;
  return choice;
}

std::size_t FeedbackLaw::segment_at(double tprime) const {
  for (std::size_t k = 0; k < segments.size(); ++k)
    if (tprime < segments[k].tprime_end) return k;
  return segments.size();
}

FeedbackLaw feedback_law(const ControlSchedule& schedule) {
  FeedbackLaw law;
  double t = 0.0;
  for (const auto& seg : schedule.segments) {
    FeedbackSegment f;
    f.pivot = argmax_abs(seg.direction);
    const double mp = seg.direction[f.pivot];
    if (mp == 0.0) throw InvalidInput("feedback_law: zero direction in schedule");
    f.ratios.resize(seg.direction.size());
    for (std::size_t i = 0; i < seg.direction.size(); ++i) {
      const double s = seg.direction[i] / mp;
      f.ratios[i] = std::abs(s) < kRatioFloor ? 0.0 : s;
    }
    t += seg.duration;
    f.tprime_end = t;
    law.segments.push_back(std::move(f));
  }
  law.total_duration = t;
  return law;
}

bool is_stationary(const FeedbackSegment& seg, const RadialState& r) {
  Vector q;
  return !pivot_quotients(seg, r, q);
}

Vector feedback_controls(const FeedbackSegment& seg, const RadialState& r) {
  Vector q;
  if (!pivot_quotients(seg, r, q)) return Vector(seg.ratios.size(), 0.0);
  const double scale = std::abs(q[argmax_abs(q)]);
  for (double& x : q) x /= scale;
  return q;
}

Vector radial_rates(const Matrix& a, const Vector& u, const RadialState& r) {
  const std::size_t n = u.size();
  Vector ur(n);
  for (std::size_t j = 0; j < n; ++j) ur[j] = u[j] * r.r[j];
  Vector rdot(n, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    if (u[i] == 0.0) continue;
    double w = 0.0;
    for (std::size_t j = 0; j < n; ++j) w += a(i, j) * ur[j];
    rdot[i] = u[i] * w;
  }
  return rdot;
}

Vector feedback_rates(const FeedbackSegment& seg, const RadialState& r, const Vector& rdot) {
  Vector q;
  const std::size_t n = seg.ratios.size();
  if (!pivot_quotients(seg, r, q)) return Vector(n, 0.0);
  const std::size_t k = argmax_abs(q);
  const double scale = std::abs(q[k]);
  const double lead = rdot[k] / r.r[k];
  Vector out(n, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    if (q[i] == 0.0) continue;
    out[i] = (q[i] / scale) * (lead - rdot[i] / r.r[i]);
  }
  return out;
}

RadialState epsilon_kick(const RadialState& r0, const FeedbackLaw& law, double eps) {
  if (!(eps > 0.0)) throw InvalidInput("epsilon_kick: eps must be positive");
  RadialState out = r0;
  for (std::size_t i = 0; i < out.n(); ++i) {
    if (out.r[i] != 0.0) continue;
    const bool needed = std::any_of(law.segments.begin(), law.segments.end(),
                                    [i](const FeedbackSegment& s) { return s.ratios[i] != 0.0; });
    if (needed) out.r[i] = eps;
  }
  return out;
}

double default_kick(const RadialState& r0) {
  double m = 0.0;
  for (double r : r0.r) m = std::max(m, r);
  return 1e-3 * m;
}

Vector physical_controls(const Vector& u, const RadialState& r, const Vector& u_dot, const Matrix& a) {
  const std::size_t n = u.size();
  if (r.n() != n || u_dot.size() != n || a.rows() != n) throw InvalidInput("physical_controls: dimension mismatch");
  Vector v(n, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    if (r.r[i] == 0.0) {
      if (u_dot[i] != 0.0) throw SingularControl("physical_controls: phase of a zero radius cannot change (index " +
                                                 std::to_string(i) + ")");
      continue;
    }
    double w = 0.0;
    for (std::size_t j = 0; j < n; ++j) w += a(i, j) * u[j] * r.r[j];
    const double uc = std::clamp(u[i], -kUnitClamp, kUnitClamp);
    const double c = std::sqrt(1.0 - uc * uc);
    v[i] = u_dot[i] / c - w * c / r.r[i];
  }
  return v;
}

BilinearState bilinear_state_from_law(const Vector& u, const RadialState& r) {
  BilinearState s;
  s.x.resize(u.size());
  s.y.resize(u.size());
  for (std::size_t i = 0; i < u.size(); ++i) {
    const double uc = std::clamp(u[i], -1.0, 1.0);
    s.y[i] = uc * r.r[i];
    s.x[i] = r.r[i] * std::sqrt(1.0 - uc * uc);
  }
  return s;
}

}  // namespace bilsdp
