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

// End-to-end analysis of one instance, and the table of worked-example
// values that the command-line tool and the acceptance suite compare against.

#pragma once

#include <optional>
#include <string>
#include <vector>

#include "bilsdp/lowrank.hpp"
#include "bilsdp/problem.hpp"
#include "bilsdp/sdp.hpp"
#include "bilsdp/simulate.hpp"
#include "bilsdp/synthesis.hpp"

namespace bilsdp {

struct PipelineConfig {
  SolverConfig solver;
  ReduceConfig reduce;
  int repetition_cap = 4096;
};

struct RunReport {
  ProblemSpec spec;
  ValidationReport validation;
  SdpProblem problem;
  SdpSolution solution;
  CertReport certificate;
  std::optional<RankReduction> reduction;
  std::string reduction_error;
  SymMatrix M;  // reduced when the reduction succeeded, else the solver output
  ControlSchedule schedule;
  RepetitionChoice repetitions;
  FeedbackLaw law;
  double transfer = 0.0;            // the SDP optimum
  double target_radius_max = 0.0;   // sqrt(p0_target + transfer)
};

/// Validates, solves, certifies, reduces and synthesizes. Stops after the
/// validation step when the instance is invalid, and after the solve when the
/// solver did not reach optimality.
RunReport analyze(const ProblemSpec& spec, const PipelineConfig& cfg = {});

struct ClosedLoopRun {
  RadialState r0;
  double kick = 0.0;
  Trajectory r;
  Trajectory xy;
  double horizon = 0.0;
};

/// Kicks r0 = sqrt(p0) where the law needs it, then runs the r and xy closed
/// loops with the same sampling grid. A non-positive horizon grows by factors
/// of ten from 10 until the r-run converges (at most 1e9). A non-positive kick
/// selects default_kick.
ClosedLoopRun run_closed_loop(const ProblemSpec& spec, const FeedbackLaw& law, double kick = 0.0,
                              double horizon = 0.0, IntegratorConfig cfg = {});

struct ReproRow {
  std::string example;
  std::string quantity;
  double reference = 0.0;
  double computed = 0.0;
  double tolerance = 0.0;

  double delta() const;
  bool pass() const { return delta() <= tolerance; }
};

/// which: "2x2", "3x3", "3chain" or "all". Throws InvalidInput otherwise.
std::vector<ReproRow> reproduce(const std::string& which);

}  // namespace bilsdp
