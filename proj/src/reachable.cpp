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

#include "bilsdp/reachable.hpp"

#include <algorithm>
#include <cmath>
#include <exception>
#include <thread>

#include "bilsdp/error.hpp"
#include "bilsdp/lowrank.hpp"

namespace bilsdp {

ReachSlice reach_slice(const ProblemSpec& spec, const Vector& base, const SolverConfig& cfg) {
  if (base.size() + 1 != spec.n()) throw InvalidInput("reach_slice: base must have n - 1 entries");
  ReachSlice slice;
  slice.base = base;
  const SdpProblem problem = make_slice_sdp(spec, base);
  const SdpSolution sol = solve(problem, cfg);
  slice.status = sol.status;
  slice.diagnostics = sol.diagnostics;
  if (!sol.optimal()) return slice;

  const double top = spec.p0[spec.target] + sol.objective_value;
  const double scale = 1.0 + std::abs(problem.objective_bound.value_or(0.0)) + spec.p0[spec.target];
  if (top < -cfg.gap_tol * 10.0 * scale) {
    slice.diagnostics = "target coordinate would end below zero";
    return slice;
  }
  slice.p_target_max = std::max(top, 0.0);
  try {
    slice.solution_rank = rank_reduce(problem, sol.M).final_rank;
  } catch (const NumericFailure&) {
    slice.solution_rank = numerical_rank(sol.M, 1e-6);
  }
  return slice;
}

std::size_t ReachSet::infeasible_count() const {
  return static_cast<std::size_t>(
      std::count_if(slices.begin(), slices.end(), [](const ReachSlice& s) { return !s.feasible(); }));
}

std::vector<std::vector<double>> default_axes(const ProblemSpec& spec, int points) {
  if (points < 1) throw InvalidInput("default_axes: need at least one point per axis");
  const double top = spec.p0.empty() ? 0.0 : *std::max_element(spec.p0.begin(), spec.p0.end());
  std::vector<double> axis(static_cast<std::size_t>(points));
  for (int k = 0; k < points; ++k) axis[static_cast<std::size_t>(k)] = points == 1 ? 0.0 : top * k / (points - 1);
  return std::vector<std::vector<double>>(spec.n() - 1, axis);
}

ReachSet reach_set(const ProblemSpec& spec, const std::vector<std::vector<double>>& axes, int workers,
                   const SolverConfig& cfg) {
  if (axes.size() + 1 != spec.n()) throw InvalidInput("reach_set: need one axis per non-target coordinate");
  ReachSet out;
  out.axes = axes;
  out.down_rate = 2.0 * spec.A(spec.target, spec.target);
  out.segments_downward_closed = out.down_rate < 0.0;

  std::size_t total = axes.empty() ? 0 : 1;
  for (const auto& ax : axes) {
    for (double v : ax)
      if (!std::isfinite(v)) throw InvalidInput("reach_set: non-finite grid value");
    total *= ax.size();
  }
  out.slices.resize(total);

  auto base_at = [&](std::size_t index) {
    Vector base(axes.size());
    for (std::size_t k = axes.size(); k-- > 0;) {
      base[k] = axes[k][index % axes[k].size()];
      index /= axes[k].size();
    }
    return base;
  };
  auto run = [&](std::size_t i) {
    const Vector base = base_at(i);
    try {
      out.slices[i] = reach_slice(spec, base, cfg);
    } catch (const std::exception& e) {
      out.slices[i].base = base;
      out.slices[i].diagnostics = e.what();
    }
  };

  const std::size_t threads = std::clamp<std::size_t>(static_cast<std::size_t>(std::max(workers, 1)), 1,
                                                      std::max<std::size_t>(total, 1));
  if (threads == 1) {
    for (std::size_t i = 0; i < total; ++i) run(i);
  } else {
    std::vector<std::thread> pool;
    for (std::size_t t = 0; t < threads; ++t)
      pool.emplace_back([&, t] {
        for (std::size_t i = t; i < total; i += threads) run(i);
      });
    for (auto& th : pool) th.join();
  }
  return out;
}

}  // namespace bilsdp
