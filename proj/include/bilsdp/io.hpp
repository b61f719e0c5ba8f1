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

// Problem files, JSON reports and CSV tables. Every number written is
// rounded to 12 significant digits.

#pragma once

#include <string>

#include "json.hpp"

#include "bilsdp/lowrank.hpp"
#include "bilsdp/problem.hpp"
#include "bilsdp/reachable.hpp"
#include "bilsdp/sdp.hpp"
#include "bilsdp/simulate.hpp"
#include "bilsdp/synthesis.hpp"

namespace bilsdp {

using Json = nlohmann::ordered_json;

/// "%.12g"; "nan", "inf", "-inf" for non-finite values.
std::string format_number(double x);
/// x rounded to 12 significant digits (null for non-finite values).
Json json_number(double x);

/// {"A": [[...]], "p0": [...], "target_index": 1-based, "label": "..."} or
/// {"chain": {"n": int, "xi": real}, "p0": [...]}.
/// Throws IoError on malformed JSON and InvalidInput on bad contents.
ProblemSpec parse_problem(const std::string& text);
ProblemSpec load_problem(const std::string& path);

std::string read_text(const std::string& path);
void write_text(const std::string& path, const std::string& text);

Json to_json(const Vector& v);
Json to_json(const Matrix& m);
Json to_json(const SymMatrix& m);
Json to_json(const ProblemSpec& spec);
Json to_json(const ValidationReport& report);
Json to_json(const SdpSolution& sol);
Json to_json(const CertReport& cert);
Json to_json(const RankReduction& red);
Json to_json(const ControlSchedule& schedule);
Json to_json(const FeedbackLaw& law);
Json to_json(const ProbeReport& report);

/// Two-space indentation and a trailing newline.
std::string dump(const Json& j);

/// t,tprime,<state columns>,<control columns>,U with one row per sample.
std::string trajectory_csv(const Trajectory& traj);
/// p_i columns for every non-target coordinate, then p_<target>_max,feasible,rank.
std::string reach_csv(const ReachSet& set, const ProblemSpec& spec);

}  // namespace bilsdp
