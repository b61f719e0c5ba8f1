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

#include "bilsdp/pipeline.hpp"

#include <cmath>
#include <exception>

#include "bilsdp/error.hpp"
#include "bilsdp/oracles.hpp"

namespace bilsdp {

RunReport analyze(const ProblemSpec& spec, const PipelineConfig& cfg) {
  RunReport rep;
  rep.spec = spec;
  rep.validation = validate(spec);
  if (!rep.validation.ok()) return rep;

  rep.problem = make_sdp(spec);
  rep.solution = solve(rep.problem, cfg.solver);
  rep.certificate = certify(rep.problem, rep.solution);
  rep.M = rep.solution.M;
  rep.transfer = rep.solution.objective_value;
  rep.target_radius_max = std::sqrt(std::max(0.0, spec.p0[spec.target] + rep.transfer));
  if (!rep.solution.optimal()) return rep;

  try {
    rep.reduction = rank_reduce(rep.problem, rep.solution.M, cfg.reduce);
    rep.M = rep.reduction->M;
  } catch (const NumericFailure& e) {
    rep.reduction_error = e.what();
  }
  rep.repetitions = choose_repetitions(rep.M, spec, cfg.repetition_cap);
  rep.schedule = schedule_from_solution(rep.M, rep.repetitions.repetitions);
  rep.law = feedback_law(rep.schedule);
  return rep;
}

ClosedLoopRun run_closed_loop(const ProblemSpec& spec, const FeedbackLaw& law, double kick, double horizon,
                              IntegratorConfig cfg) {
  ClosedLoopRun run;
  const RadialState r0 = p_to_r(spec.p0);
  run.kick = kick > 0.0 ? kick : default_kick(r0);
  run.r0 = law.segments.empty() ? r0 : epsilon_kick(r0, law, run.kick);

  const bool grow = !(horizon > 0.0);
  double h = grow ? 10.0 : horizon;
  const double user_sampling = cfg.sample_interval;
  while (true) {
    cfg.sample_interval = user_sampling > 0.0 ? user_sampling : h / 1000.0;
    run.r = simulate_r(law, spec.A, run.r0, h, cfg);
    const bool hit_horizon = run.r.status == SimStatus::completed && run.r.diagnostics.empty();
    if (!grow || !hit_horizon || h >= 1e9) break;
    h *= 10.0;
  }
  run.horizon = h;

  BilinearState s0;
  if (law.segments.empty()) {
    s0 = bilinear_state_from_law(Vector(r0.n(), 0.0), run.r0);
  } else {
    s0 = bilinear_state_from_law(feedback_controls(law.segments.front(), run.r0), run.r0);
  }
  run.xy = simulate_xy(law, spec.A, s0, h, cfg);
  return run;
}

double ReproRow::delta() const { return std::abs(reference - computed); }

namespace {

void add(std::vector<ReproRow>& rows, const char* example, const char* quantity, double reference, double computed,
         double tol) {
  rows.push_back({example, quantity, reference, computed, tol});
}

double solve_transfer(const ProblemSpec& spec) {
  const SdpSolution sol = solve(make_sdp(spec));
  return sol.optimal() ? sol.objective_value : std::nan("");
}

void repro_2x2(std::vector<ReproRow>& rows) {
  const RunReport rep = analyze(ProblemSpec::chain(2, 1.0, {1.0, 0.0}, "2x2"));
  const double eff = std::sqrt(2.0) - 1.0;
  add(rows, "2x2", "transfer", eff * eff, rep.transfer, 1e-6);
  add(rows, "2x2", "efficiency r2_max", eff, rep.target_radius_max, 1e-6);
}

void repro_3x3(std::vector<ReproRow>& rows) {
  const RunReport rep = analyze(ProblemSpec::chain(3, 1.0, {1.0, 1.0, 0.0}, "3x3"));
  add(rows, "3x3", "transfer", 0.2821, rep.transfer, 1e-3);
  const SpectralDecomposition eig = spectral_decompose(rep.M);
  add(rows, "3x3", "rank after reduction", 1.0, rep.reduction ? rep.reduction->final_rank : -1.0, 0.0);
  add(rows, "3x3", "lambda (= T_f)", 0.8589, eig.max_eigenvalue(), 2e-3);
  const Vector m = eig.vector(0);
  const double reference_m[3] = {0.4546, 0.8257, 0.3339};
  const char* names[3] = {"m_1", "m_2", "m_3"};
  for (int i = 0; i < 3; ++i) add(rows, "3x3", names[i], reference_m[i], m[static_cast<std::size_t>(i)], 2e-3);
  const double reference_M[3][3] = {{0.1775, 0.3225, 0.1304}, {0.3225, 0.5856, 0.2368}, {0.1304, 0.2368, 0.0958}};
  static const char* entry[3][3] = {{"M_11", "M_12", "M_13"}, {"", "M_22", "M_23"}, {"", "", "M_33"}};
  for (std::size_t i = 0; i < 3; ++i)
    for (std::size_t j = i; j < 3; ++j) add(rows, "3x3", entry[i][j], reference_M[i][j], rep.M(i, j), 2e-3);
  add(rows, "3x3", "r3_max", 0.5311, rep.target_radius_max, 1e-3);
  add(rows, "3x3", "x0 = m_2/m_1", 1.8163, m[1] / m[0], 2e-3);
  add(rows, "3x3", "y0 = m_3/m_1", 0.7345, m[2] / m[0], 2e-3);
}

void repro_3chain(std::vector<ReproRow>& rows) {
  const double eff = 2.0 - std::sqrt(3.0);
  const double tols[2] = {1e-2, 3e-3};
  const char* names[2] = {"efficiency, delta=1e-2", "efficiency, delta=1e-3"};
  const double deltas[2] = {1e-2, 1e-3};
  for (int k = 0; k < 2; ++k) {
    const double d2 = deltas[k] * deltas[k];
    const double e = solve_transfer(ProblemSpec::chain(3, 1.0, {1.0, d2, d2}));
    add(rows, "3chain", names[k], eff, std::sqrt(std::max(0.0, e + d2)), tols[k]);
  }
  const double e0 = solve_transfer(ProblemSpec::chain(3, 1.0, {1.0, 0.0, 0.0}));
  add(rows, "3chain", "efficiency, p0=(1,0,0)", eff, std::sqrt(std::max(0.0, e0)), 1e-6);
  add(rows, "3chain", "closed form x0^2/2", eff, analytic_3chain(1.0).efficiency, 1e-12);
}

}  // namespace

std::vector<ReproRow> reproduce(const std::string& which) {
  std::vector<ReproRow> rows;
  const bool all = which == "all";
  if (!all && which != "2x2" && which != "3x3" && which != "3chain")
    throw InvalidInput("reproduce: unknown case '" + which + "'");
  if (all || which == "2x2") repro_2x2(rows);
  if (all || which == "3x3") repro_3x3(rows);
  if (all || which == "3chain") repro_3chain(rows);
  return rows;
}

}  // namespace bilsdp
