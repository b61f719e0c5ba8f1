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

// bilsdp: optimal transfer, controls and reachable sets for dissipative
// bilinear systems.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "bilsdp/error.hpp"
#include "bilsdp/io.hpp"
#include "bilsdp/lowrank.hpp"
#include "bilsdp/pipeline.hpp"
#include "bilsdp/reachable.hpp"

namespace {

using namespace bilsdp;

enum Exit : int { kOk = 0, kValidation = 1, kNonOptimal = 2, kIo = 3, kNumeric = 4 };

struct Options {
  std::string problem;
  std::string out;
  double gap_tol = 1e-8;
  double eps_kick = 0.0;
  double horizon = 0.0;
  std::uint64_t seed = 1;
  int workers = 1;
  std::vector<int> grid;
  int count = 200;
  std::size_t n_min = 4;
  std::size_t n_max = 6;
  bool tridiagonal = false;
  std::string repro_case = "all";
};

class Stopwatch {
 public:
  double seconds() const {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
  }

 private:
  std::chrono::steady_clock::time_point start_ = std::chrono::steady_clock::now();
};

PipelineConfig pipeline_config(const Options& o) {
  PipelineConfig cfg;
  cfg.solver.gap_tol = o.gap_tol;
  return cfg;
}

void emit(const Options& o, const std::string& text) {
  if (o.out.empty() || o.out == "-") {
    std::cout << text;
  } else {
    write_text(o.out, text);
  }
}

ProblemSpec load_valid(const Options& o, int& code) {
  ProblemSpec spec = load_problem(o.problem);
  const ValidationReport v = validate(spec);
  code = v.ok() ? kOk : kValidation;
  for (const auto& m : v.messages) std::cerr << "validation: " << m << "\n";
  return spec;
}

Json run_json(const RunReport& rep) {
  Json j;
  j["problem"] = to_json(rep.spec);
  j["validation"] = to_json(rep.validation);
  j["solver"] = to_json(rep.solution);
  j["certificate"] = to_json(rep.certificate);
  j["transfer"] = json_number(rep.transfer);
  j["target_radius_max"] = json_number(rep.target_radius_max);
  if (rep.reduction) {
    j["rank_before"] = rep.reduction->initial_rank;
    j["rank_after"] = rep.reduction->final_rank;
    j["reduction"] = to_json(*rep.reduction);
  } else {
    j["reduction_error"] = rep.reduction_error;
  }
  Json sched;
  sched["segments"] = rep.schedule.segments.size();
  sched["repetitions"] = rep.repetitions.repetitions;
  sched["repetitions_satisfied"] = rep.repetitions.satisfied;
  sched["min_coordinate"] = json_number(rep.repetitions.min_coordinate);
  sched["total_duration"] = json_number(rep.schedule.total_duration);
  j["schedule_summary"] = sched;
  return j;
}

int finish_analysis(const RunReport& rep) {
  if (!rep.validation.ok()) return kValidation;
  if (!rep.solution.optimal()) {
    std::cerr << "solver: " << to_string(rep.solution.status) << " " << rep.solution.diagnostics << "\n";
    return rep.solution.status == SolveStatus::numeric_failure ? kNumeric : kNonOptimal;
  }
  return kOk;
}

int cmd_validate(const Options& o) {
  const ProblemSpec spec = load_problem(o.problem);
  const ValidationReport v = validate(spec);
  emit(o, dump(to_json(v)));
  for (const auto& m : v.messages) std::cerr << "validation: " << m << "\n";
  return v.ok() ? kOk : kValidation;
}

int cmd_solve(const Options& o) {
  Stopwatch clock;
  int code = kOk;
  const ProblemSpec spec = load_valid(o, code);
  if (code != kOk) return code;
  const RunReport rep = analyze(spec, pipeline_config(o));
  code = finish_analysis(rep);
  if (o.out.empty()) {
    std::cout << dump(run_json(rep));
  } else {
    write_text(o.out, dump(run_json(rep)));
  }
  std::fprintf(stderr, "status %s  transfer %s  r_target_max %s  rank %d -> %d  iterations %d  %.3f s\n",
               to_string(rep.solution.status).c_str(), format_number(rep.transfer).c_str(),
               format_number(rep.target_radius_max).c_str(), rep.reduction ? rep.reduction->initial_rank : -1,
               rep.reduction ? rep.reduction->final_rank : -1, rep.solution.iterations, clock.seconds());
  return code;
}

int cmd_synthesize(const Options& o) {
  int code = kOk;
  const ProblemSpec spec = load_valid(o, code);
  if (code != kOk) return code;
  const RunReport rep = analyze(spec, pipeline_config(o));
  code = finish_analysis(rep);
  if (code != kOk) return code;
  Json j;
  j["transfer"] = json_number(rep.transfer);
  j["schedule"] = to_json(rep.schedule);
  j["law"] = to_json(rep.law);
  emit(o, dump(j));
  return kOk;
}

std::string with_suffix(const std::string& base, const std::string& suffix) {
  const auto dot = base.rfind('.');
  const auto slash = base.find_last_of('/');
  if (dot == std::string::npos || (slash != std::string::npos && dot < slash)) return base + suffix;
  return base.substr(0, dot) + suffix + base.substr(dot);
}

int cmd_simulate(const Options& o) {
  Stopwatch clock;
  int code = kOk;
  const ProblemSpec spec = load_valid(o, code);
  if (code != kOk) return code;
  const RunReport rep = analyze(spec, pipeline_config(o));
  code = finish_analysis(rep);
  if (code != kOk) return code;
  const ClosedLoopRun run = run_closed_loop(spec, rep.law, o.eps_kick, o.horizon);
  const std::string base = o.out.empty() ? "trajectory.csv" : o.out;
  write_text(with_suffix(base, "_r"), trajectory_csv(run.r));
  write_text(with_suffix(base, "_xy"), trajectory_csv(run.xy));

  const std::size_t t = spec.target;
  const double r_end = run.r.states.back()[t];
  const auto xy_r = radial_states(run.xy);
  std::printf("kick %s  horizon %s\n", format_number(run.kick).c_str(), format_number(run.horizon).c_str());
  std::printf("r-system  : status %s  steps %zu  r_target(end) %s  tprime %s / %s\n", to_string(run.r.status).c_str(),
              run.r.size(), format_number(r_end).c_str(), format_number(run.r.tprime.back()).c_str(),
              format_number(rep.law.total_duration).c_str());
  std::printf("xy-system : status %s  steps %zu  r_target(end) %s  sup|r_xy - r| %s\n",
              to_string(run.xy.status).c_str(), run.xy.size(), format_number(xy_r.back()[t]).c_str(),
              format_number(radial_sup_distance(run.r, run.xy)).c_str());
  std::printf("bound     : sqrt(p0_target + transfer) = %s   (%.3f s)\n",
              format_number(rep.target_radius_max).c_str(), clock.seconds());
  for (const Trajectory* tr : {&run.r, &run.xy}) {
    if (tr->status == SimStatus::numeric_failure || tr->status == SimStatus::singular_control) {
      std::cerr << "simulation: " << to_string(tr->status) << " " << tr->diagnostics << "\n";
      return kNumeric;
    }
  }
  return kOk;
}

int cmd_reach(const Options& o) {
  int code = kOk;
  const ProblemSpec spec = load_valid(o, code);
  if (code != kOk) return code;
  std::vector<std::vector<double>> axes = default_axes(spec, 21);
  if (!o.grid.empty()) {
    if (o.grid.size() != 1 && o.grid.size() != axes.size())
      throw InvalidInput("--grid takes one count or one count per non-target coordinate");
    for (std::size_t k = 0; k < axes.size(); ++k) {
      const int pts = o.grid.size() == 1 ? o.grid[0] : o.grid[k];
      axes[k] = default_axes(spec, pts)[k];
    }
  }
  SolverConfig cfg;
  cfg.gap_tol = o.gap_tol;
  const ReachSet set = reach_set(spec, axes, o.workers, cfg);
  emit(o, reach_csv(set, spec));
  std::fprintf(stderr, "%zu slices, %zu not reachable\n", set.slices.size(), set.infeasible_count());
  return kOk;
}

int cmd_probe(const Options& o) {
  const ProbeReport rep = conjecture_probe(o.count, o.n_min, o.n_max, o.seed, o.workers, o.tridiagonal);
  emit(o, dump(to_json(rep)));
  for (const auto& d : rep.dimensions) {
    std::fprintf(stderr, "n=%zu  solved %d  failures %d  rank-one fraction %s  bound violations %d\n", d.n,
                 d.solved, d.failures, format_number(d.rank_one_fraction).c_str(), d.bound_violations);
  }
  return kOk;
}

int cmd_repro(const Options& o) {
  const std::vector<ReproRow> rows = reproduce(o.repro_case);
  bool ok = true;
  std::printf("%-8s %-24s %14s %14s %11s %9s  %s\n", "example", "quantity", "reference", "computed", "|delta|", "tol",
              "ok");
  for (const auto& r : rows) {
    ok = ok && r.pass();
    std::printf("%-8s %-24s %14.10f %14.10f %11.3e %9.1e  %s\n", r.example.c_str(), r.quantity.c_str(), r.reference,
                r.computed, r.delta(), r.tolerance, r.pass() ? "yes" : "NO");
  }
  return ok ? kOk : kNonOptimal;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Optimal transfer, controls and reachable sets for dissipative bilinear systems"};
  app.require_subcommand(1);
  Options o;

  auto problem_opts = [&](CLI::App* sub) {
    sub->add_option("--problem", o.problem, "Problem file (JSON)")->required();
    sub->add_option("--out", o.out, "Output path");
    sub->add_option("--gap-tol", o.gap_tol, "Relative duality gap tolerance");
  };

  CLI::App* validate_cmd = app.add_subcommand("validate", "Check the structural hypotheses of a problem");
  problem_opts(validate_cmd);
  CLI::App* solve_cmd = app.add_subcommand("solve", "Solve the SDP and write a JSON report");
  problem_opts(solve_cmd);
  CLI::App* synth_cmd = app.add_subcommand("synthesize", "Write the control schedule and feedback law");
  problem_opts(synth_cmd);
  CLI::App* sim_cmd = app.add_subcommand("simulate", "Closed-loop r- and xy-trajectories as CSV");
  problem_opts(sim_cmd);
  sim_cmd->add_option("--eps-kick", o.eps_kick, "Initial kick for zero radii (default 1e-3 * max r)");
  sim_cmd->add_option("--horizon", o.horizon, "Integration horizon (default: grow until converged)");
  CLI::App* reach_cmd = app.add_subcommand("reach", "Sweep the reachable set and write CSV");
  problem_opts(reach_cmd);
  reach_cmd->add_option("--grid", o.grid, "Points per axis (one value or one per axis)")->delimiter(',');
  reach_cmd->add_option("--workers", o.workers, "Worker threads");
  CLI::App* probe_cmd = app.add_subcommand("probe-rank", "Rank statistics of optimal solutions on random instances");
  probe_cmd->add_option("--out", o.out, "Output JSON path");
  probe_cmd->add_option("--count", o.count, "Instances per dimension");
  probe_cmd->add_option("--n-min", o.n_min, "Smallest dimension");
  probe_cmd->add_option("--n-max", o.n_max, "Largest dimension");
  probe_cmd->add_option("--seed", o.seed, "Random seed");
  probe_cmd->add_option("--workers", o.workers, "Worker threads");
  probe_cmd->add_flag("--tridiagonal", o.tridiagonal, "Draw tridiagonal instances");
  CLI::App* repro_cmd = app.add_subcommand("repro", "Compare against the worked examples");
  repro_cmd->add_option("case", o.repro_case, "2x2, 3x3, 3chain or all")
      ->check(CLI::IsMember({"2x2", "3x3", "3chain", "all"}));

  CLI11_PARSE(app, argc, argv);

  try {
    if (*validate_cmd) return cmd_validate(o);
    if (*solve_cmd) return cmd_solve(o);
    if (*synth_cmd) return cmd_synthesize(o);
    if (*sim_cmd) return cmd_simulate(o);
    if (*reach_cmd) return cmd_reach(o);
    if (*probe_cmd) return cmd_probe(o);
    if (*repro_cmd) return cmd_repro(o);
  } catch (const IoError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kIo;
  } catch (const InvalidInput& e) {
    std::cerr << "invalid input: " << e.what() << "\n";
    return kValidation;
  } catch (const NumericFailure& e) {
    std::cerr << "numeric failure: " << e.what() << "\n";
    return kNumeric;
  } catch (const SingularControl& e) {
    std::cerr << "singular control: " << e.what() << "\n";
    return kNumeric;
  }
  return kOk;
}
