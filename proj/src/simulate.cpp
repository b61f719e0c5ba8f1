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

#include "bilsdp/simulate.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "bilsdp/error.hpp"

namespace bilsdp {

std::string to_string(SpaceTag tag) {
  switch (tag) {
    case SpaceTag::p: return "p";
    case SpaceTag::r: return "r";
    case SpaceTag::xy: return "xy";
  }
  return "?";
}

std::string to_string(SimStatus status) {
  switch (status) {
    case SimStatus::completed: return "completed";
    case SimStatus::converged: return "converged";
    case SimStatus::stationary: return "stationary";
    case SimStatus::numeric_failure: return "numeric-failure";
    case SimStatus::singular_control: return "singular-control";
  }
  return "?";
}

namespace {

using Rhs = std::function<Vector(double, const Vector&)>;

// Dormand-Prince 5(4) tableau.
constexpr double c2 = 1.0 / 5, c3 = 3.0 / 10, c4 = 4.0 / 5, c5 = 8.0 / 9;
constexpr double a21 = 1.0 / 5;
constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187, a53 = 64448.0 / 6561, a54 = -212.0 / 729;
constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247, a64 = 49.0 / 176,
                 a65 = -5103.0 / 18656;
constexpr double b1 = 35.0 / 384, b3 = 500.0 / 1113, b4 = 125.0 / 192, b5 = -2187.0 / 6784, b6 = 11.0 / 84;
constexpr double e1 = 71.0 / 57600, e3 = -71.0 / 16695, e4 = 71.0 / 1920, e5 = -17253.0 / 339200,
                 e6 = 22.0 / 525, e7 = -1.0 / 40;

// One trial step from y with slope k1 = f(y). Returns the scaled error norm.
double dopri_step(const Rhs& f, double t, const Vector& y, const Vector& k1, double h, const IntegratorConfig& cfg,
                  Vector& y_out) {
  const std::size_t n = y.size();
  Vector tmp(n);
  auto stage = [&](double c, std::initializer_list<std::pair<const Vector*, double>> terms) {
    for (std::size_t i = 0; i < n; ++i) {
      double s = 0.0;
      for (const auto& [k, c] : terms) s += c * (*k)[i];
      tmp[i] = y[i] + h * s;
    }
    return f(t + c * h, tmp);
  };
  const Vector k2 = stage(c2, {{&k1, a21}});
  const Vector k3 = stage(c3, {{&k1, a31}, {&k2, a32}});
  const Vector k4 = stage(c4, {{&k1, a41}, {&k2, a42}, {&k3, a43}});
  const Vector k5 = stage(c5, {{&k1, a51}, {&k2, a52}, {&k3, a53}, {&k4, a54}});
  const Vector k6 = stage(1.0, {{&k1, a61}, {&k2, a62}, {&k3, a63}, {&k4, a64}, {&k5, a65}});
  y_out.resize(n);
  for (std::size_t i = 0; i < n; ++i)
    y_out[i] = y[i] + h * (b1 * k1[i] + b3 * k3[i] + b4 * k4[i] + b5 * k5[i] + b6 * k6[i]);
  const Vector k7 = f(t + h, y_out);
  double err = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double e = h * (e1 * k1[i] + e3 * k3[i] + e4 * k4[i] + e5 * k5[i] + e6 * k6[i] + e7 * k7[i]);
    const double sc = cfg.atol + cfg.rtol * std::max(std::abs(y[i]), std::abs(y_out[i]));
    err = std::max(err, std::abs(e) / sc);
  }
  for (double v : y_out)
    if (!std::isfinite(v)) return std::numeric_limits<double>::infinity();
  return err;
}

double grow_factor(double err) {
  if (err == 0.0) return 5.0;
  return std::clamp(0.9 * std::pow(err, -0.2), 0.2, 5.0);
}

// Hooks a closed or open loop driver supplies to the shared stepping loop.
struct LoopModel {
  Rhs rhs;  // for the current segment
  std::function<void(double, const Vector&)> record;
  double tprime_end = std::numeric_limits<double>::infinity();  // active segment boundary
  std::function<bool()> next_segment;             // false once the schedule is exhausted
  double tprime_stop = std::numeric_limits<double>::infinity();
  std::size_t tprime_index = 0;
  std::size_t motion_dims = 0;  // leading components checked for stalling
};

void run_loop(LoopModel& model, Vector y, double horizon, const IntegratorConfig& cfg, Trajectory& traj) {
  const double hmax = cfg.max_step > 0.0 ? cfg.max_step : horizon / 1000.0;
  double t = 0.0;
  double h = std::min(hmax, 1e-3);
  model.record(t, y);
  long steps = 0;
  auto next_sample = [&](double tt) {
    return (std::floor(tt / cfg.sample_interval + 1e-9) + 1.0) * cfg.sample_interval;
  };
  try {
    while (true) {
      if (y[model.tprime_index] >= model.tprime_stop) {
        traj.status = SimStatus::converged;
        break;
      }
      if (t >= horizon) {
        traj.status = SimStatus::completed;
        break;
      }
      Vector k1 = model.rhs(t, y);
      double rate = 0.0;
      for (std::size_t i = 0; i < model.motion_dims; ++i) rate = std::max(rate, std::abs(k1[i]));
      if (rate < cfg.stall_rate) {
        traj.status = SimStatus::stationary;
        break;
      }
      if (++steps > cfg.max_steps) {
        traj.status = SimStatus::numeric_failure;
        traj.diagnostics = "step budget exhausted";
        break;
      }
      h = std::min({h, hmax, horizon - t});
      double land = -1.0;
      if (cfg.sample_interval > 0.0) {
        const double ts = std::min(next_sample(t), horizon);
        if (t + h >= ts - 1e-12 * cfg.sample_interval) {
          h = ts - t;
          land = ts;
        }
      }
      Vector y_new;
      const double err = dopri_step(model.rhs, t, y, k1, h, cfg, y_new);
      if (!(err <= 1.0)) {
        h *= std::isfinite(err) ? std::max(0.2, 0.9 * std::pow(err, -0.25)) : 0.1;
        if (h < cfg.min_step * std::max(1.0, t)) {
          traj.status = SimStatus::numeric_failure;
          std::ostringstream os;
          os << "step size underflow at t = " << t;
          traj.diagnostics = os.str();
          break;
        }
        continue;
      }
      const double tp0 = y[model.tprime_index];
      const double tp1 = y_new[model.tprime_index];
      if (tp1 > model.tprime_end && tp1 > tp0) {
        // Segment switch: land on the crossing by interpolating t' linearly
        // within the step and retaking the shortened step.
        double frac = std::clamp((model.tprime_end - tp0) / (tp1 - tp0), 0.0, 1.0);
        double hs = h * frac;
        Vector y_sw = y;
        if (hs > 0.0) {
          const double err_sw = dopri_step(model.rhs, t, y, k1, hs, cfg, y_sw);
          if (!(err_sw <= 1.0)) {
            h = hs * 0.5;
            continue;
          }
        }
        t += hs;
        y = std::move(y_sw);
        model.record(t, y);
        if (!model.next_segment()) {
          traj.status = SimStatus::completed;
          traj.diagnostics = "schedule exhausted";
          break;
        }
        continue;
      }
      t = land >= 0.0 ? land : t + h;
      y = std::move(y_new);
      model.record(t, y);
      h *= grow_factor(err);
    }
  } catch (const SingularControl& e) {
    traj.status = SimStatus::singular_control;
    traj.diagnostics = e.what();
  } catch (const NumericFailure& e) {
    traj.status = SimStatus::numeric_failure;
    traj.diagnostics = e.what();
  }
}

void require_dims(const Matrix& a, std::size_t n, const char* what) {
  if (!a.is_square() || a.rows() != n) throw InvalidInput(std::string(what) + ": dimension mismatch");
}

}  // namespace

Trajectory simulate_p(const ControlSchedule& schedule, const Matrix& a, const Vector& p0) {
  const std::size_t n = p0.size();
  require_dims(a, n, "simulate_p");
  Trajectory traj;
  traj.space = SpaceTag::p;
  Vector p = p0;
  double t = 0.0;
  traj.times.push_back(t);
  traj.states.push_back(p);
  double lo = p.empty() ? 0.0 : *std::min_element(p.begin(), p.end());
  for (const auto& seg : schedule.segments) {
    const Vector& m = seg.direction;
    for (std::size_t i = 0; i < n; ++i) {
      double rate = 0.0;
      for (std::size_t j = 0; j < n; ++j) rate += 2.0 * a(i, j) * m[i] * m[j];
      p[i] += rate * seg.duration;
      lo = std::min(lo, p[i]);
    }
    t += seg.duration;
    traj.times.push_back(t);
    traj.states.push_back(p);
  }
  traj.tprime = traj.times;
  traj.min_coordinate = lo;
  return traj;
}

Trajectory simulate_r(const FeedbackLaw& law, const Matrix& a, const RadialState& r0, double horizon,
                      const IntegratorConfig& cfg) {
  const std::size_t n = r0.n();
  require_dims(a, n, "simulate_r");
  if (!law.segments.empty() && law.n() != n) throw InvalidInput("simulate_r: law dimension mismatch");
  for (double r : r0.r)
    if (!(r >= 0.0)) throw InvalidInput("simulate_r: negative initial radius");
  Trajectory traj;
  traj.space = SpaceTag::r;

  std::size_t seg = 0;
  RadialState rs;
  rs.r.resize(n);
  auto controls = [&](const Vector& y) {
    std::copy(y.begin(), y.begin() + static_cast<long>(n), rs.r.begin());
    for (double& r : rs.r) r = std::max(r, 0.0);
    if (seg >= law.segments.size()) return Vector(n, 0.0);
    return feedback_controls(law.segments[seg], rs);
  };

  LoopModel model;
  model.motion_dims = n;
  model.tprime_index = n;
  model.rhs = [&](double, const Vector& y) {
    const Vector u = controls(y);
    Vector dy = radial_rates(a, u, rs);
    double u2 = 0.0;
    for (std::size_t i = 0; i < n; ++i) u2 += u[i] * u[i] * rs.r[i] * rs.r[i];
    dy.push_back(u2);
    return dy;
  };
  model.record = [&](double t, const Vector& y) {
    const Vector u = controls(y);
    double u2 = 0.0;
    for (std::size_t i = 0; i < n; ++i) u2 += u[i] * u[i] * rs.r[i] * rs.r[i];
    traj.times.push_back(t);
    traj.states.emplace_back(y.begin(), y.begin() + static_cast<long>(n));
    traj.controls.push_back(u);
    traj.U.push_back(std::sqrt(u2));
    traj.tprime.push_back(y[n]);
  };
  auto set_boundary = [&] {
    model.tprime_end = seg < law.segments.size() ? law.segments[seg].tprime_end : std::numeric_limits<double>::infinity();
  };
  model.next_segment = [&] {
    ++seg;
    set_boundary();
    return seg < law.segments.size();
  };
  set_boundary();
  model.tprime_stop = (1.0 - cfg.tprime_fraction) * law.total_duration;

  Vector y = r0.r;
  y.push_back(0.0);
  if (law.segments.empty()) {
    model.record(0.0, y);
    traj.status = SimStatus::stationary;
    return traj;
  }
  run_loop(model, std::move(y), horizon, cfg, traj);
  return traj;
}

namespace {

Vector coupling(const Matrix& a, const Vector& y) {
  const std::size_t n = y.size();
  Vector w(n, 0.0);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) w[i] += a(i, j) * y[j];
  return w;
}

Trajectory simulate_xy_impl(const std::function<Vector(double, const BilinearState&)>& control, const Matrix& a,
                            const BilinearState& s0, double horizon, const IntegratorConfig& cfg,
                            const FeedbackLaw* law, std::size_t& seg) {
  const std::size_t n = s0.n();
  require_dims(a, n, "simulate_xy");
  if (s0.y.size() != n) throw InvalidInput("simulate_xy: x and y lengths differ");
  Trajectory traj;
  traj.space = SpaceTag::xy;

  BilinearState s;
  s.x.resize(n);
  s.y.resize(n);
  auto unpack = [&](const Vector& z) {
    std::copy(z.begin(), z.begin() + static_cast<long>(n), s.x.begin());
    std::copy(z.begin() + static_cast<long>(n), z.begin() + static_cast<long>(2 * n), s.y.begin());
  };
  LoopModel model;
  model.motion_dims = 2 * n;
  model.tprime_index = 2 * n;
  model.rhs = [&](double t, const Vector& z) {
    unpack(z);
    const Vector v = control(t, s);
    const Vector w = coupling(a, s.y);
    Vector dz(2 * n + 1);
    double u2 = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      dz[i] = -v[i] * s.y[i];
      dz[n + i] = v[i] * s.x[i] + w[i];
      u2 += s.y[i] * s.y[i];
    }
    dz[2 * n] = u2;
    return dz;
  };
  model.record = [&](double t, const Vector& z) {
    unpack(z);
    traj.times.push_back(t);
    traj.states.emplace_back(z.begin(), z.begin() + static_cast<long>(2 * n));
    traj.controls.push_back(control(t, s));
    double u2 = 0.0;
    for (double y : s.y) u2 += y * y;
    traj.U.push_back(std::sqrt(u2));
    traj.tprime.push_back(z[2 * n]);
  };
  auto set_boundary = [&] {
    model.tprime_end = law && seg < law->segments.size() ? law->segments[seg].tprime_end
                                                          : std::numeric_limits<double>::infinity();
  };
  model.next_segment = [&] {
    ++seg;
    set_boundary();
    return law && seg < law->segments.size();
  };
  set_boundary();
  if (law) model.tprime_stop = (1.0 - cfg.tprime_fraction) * law->total_duration;

  Vector z = s0.x;
  z.insert(z.end(), s0.y.begin(), s0.y.end());
  z.push_back(0.0);
  try {
    if (law && law->segments.empty()) {
      model.record(0.0, z);
      traj.status = SimStatus::stationary;
      return traj;
    }
  } catch (const SingularControl& e) {
    traj.status = SimStatus::singular_control;
    traj.diagnostics = e.what();
    return traj;
  }
  run_loop(model, std::move(z), horizon, cfg, traj);
  return traj;
}

}  // namespace

Trajectory simulate_xy(const FeedbackLaw& law, const Matrix& a, const BilinearState& s0, double horizon,
                       const IntegratorConfig& cfg) {
  const std::size_t n = s0.n();
  if (!law.segments.empty() && law.n() != n) throw InvalidInput("simulate_xy: law dimension mismatch");
  std::size_t seg = 0;
  auto control = [&](double, const BilinearState& s) {
    Vector v(n, 0.0);
    if (seg >= law.segments.size()) return v;
    const FeedbackSegment& fs = law.segments[seg];
    RadialState r = xy_to_r(s);
    const Vector u = feedback_controls(fs, r);
    const Vector w = coupling(a, s.y);
    Vector rdot(n, 0.0);
    for (std::size_t i = 0; i < n; ++i)
      if (r.r[i] > 0.0) rdot[i] = s.y[i] * w[i] / r.r[i];
    const Vector u_dot = feedback_rates(fs, r, rdot);
    for (std::size_t i = 0; i < n; ++i) {
      const double ri = r.r[i];
      if (ri == 0.0) {
        if (u_dot[i] != 0.0) throw SingularControl("simulate_xy: phase of a zero radius cannot change");
        continue;
      }
      // Realized dynamics: d(y_i/r_i)/dt = v_i x_i / r_i + w_i x_i^2 / r_i^3.
      // Choose v_i so that it equals u_dot_i + gain * (u_i - y_i / r_i).
      const double xi = s.x[i];
      const double floor = 1e-12 * ri;
      const double denom = std::abs(xi) < floor ? std::copysign(floor, xi) : xi;
      const double drive = u_dot[i] * ri + cfg.tracking_gain * (u[i] * ri - s.y[i]);
      const double vi = drive / denom - w[i] * xi / (ri * ri);
      v[i] = std::clamp(vi, -cfg.max_phase_rate, cfg.max_phase_rate);
    }
    return v;
  };
  return simulate_xy_impl(control, a, s0, horizon, cfg, &law, seg);
}

Trajectory simulate_xy(const PhaseControl& control, const Matrix& a, const BilinearState& s0, double horizon,
                       const IntegratorConfig& cfg) {
  std::size_t seg = 0;
  return simulate_xy_impl(control, a, s0, horizon, cfg, nullptr, seg);
}

Vector rescaled_time(const Trajectory& traj) {
  Vector out(traj.times.size(), 0.0);
  if (traj.U.size() != traj.times.size()) throw InvalidInput("rescaled_time: trajectory has no U samples");
  for (std::size_t k = 1; k < out.size(); ++k) {
    const double dt = traj.times[k] - traj.times[k - 1];
    out[k] = out[k - 1] + 0.5 * dt * (traj.U[k - 1] * traj.U[k - 1] + traj.U[k] * traj.U[k]);
  }
  return out;
}

std::vector<Vector> radial_states(const Trajectory& xy) {
  std::vector<Vector> out;
  out.reserve(xy.states.size());
  for (const auto& z : xy.states) {
    const std::size_t n = z.size() / 2;
    Vector r(n);
    for (std::size_t i = 0; i < n; ++i) r[i] = std::hypot(z[i], z[n + i]);
    out.push_back(std::move(r));
  }
  return out;
}

double radial_sup_distance(const Trajectory& a, const Trajectory& b, double time_tol) {
  const std::vector<Vector> ra = a.space == SpaceTag::xy ? radial_states(a) : a.states;
  const std::vector<Vector> rb = b.space == SpaceTag::xy ? radial_states(b) : b.states;
  double worst = -1.0;
  std::size_t j = 0;
  for (std::size_t i = 0; i < a.times.size(); ++i) {
    while (j < b.times.size() && b.times[j] < a.times[i] - time_tol) ++j;
    if (j == b.times.size()) break;
    if (std::abs(b.times[j] - a.times[i]) > time_tol) continue;
    double d = 0.0;
    for (std::size_t k = 0; k < ra[i].size(); ++k) d = std::max(d, std::abs(ra[i][k] - rb[j][k]));
    worst = std::max(worst, d);
  }
  return worst;
}

}  // namespace bilsdp
