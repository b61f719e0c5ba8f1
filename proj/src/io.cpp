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

#include "bilsdp/io.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "bilsdp/error.hpp"

namespace bilsdp {

std::string format_number(double x) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.12g", x);
  return buf;
}

Json json_number(double x) {
  if (!std::isfinite(x)) return nullptr;
  return std::stod(format_number(x));
}

namespace {

Vector read_vector(const Json& j, const char* what) {
  if (!j.is_array()) throw InvalidInput(std::string("problem: ") + what + " must be an array of numbers");
  Vector v;
  for (const auto& x : j) {
    if (!x.is_number()) throw InvalidInput(std::string("problem: ") + what + " must be an array of numbers");
    v.push_back(x.get<double>());
  }
  return v;
}

}  // namespace

ProblemSpec parse_problem(const std::string& text) {
  Json j;
  try {
    j = Json::parse(text);
  } catch (const Json::parse_error& e) {
    throw IoError(std::string("problem file is not valid JSON: ") + e.what());
  }
  if (!j.is_object()) throw InvalidInput("problem: top level must be an object");
  if (!j.contains("p0")) throw InvalidInput("problem: missing \"p0\"");
  Vector p0 = read_vector(j["p0"], "p0");
  const std::string label = j.contains("label") && j["label"].is_string() ? j["label"].get<std::string>() : "";

  Matrix a;
  if (j.contains("chain")) {
    const Json& c = j["chain"];
    if (!c.is_object() || !c.contains("n") || !c.contains("xi") || !c["n"].is_number_integer() ||
        !c["xi"].is_number())
      throw InvalidInput("problem: \"chain\" needs integer \"n\" and real \"xi\"");
    const long n = c["n"].get<long>();
    if (n < 1) throw InvalidInput("problem: chain length must be positive");
    a = ProblemSpec::chain(static_cast<std::size_t>(n), c["xi"].get<double>(), Vector(static_cast<std::size_t>(n)))
            .A;
  } else if (j.contains("A")) {
    const Json& rows = j["A"];
    if (!rows.is_array() || rows.empty()) throw InvalidInput("problem: \"A\" must be a non-empty array of rows");
    std::vector<Vector> data;
    for (const auto& row : rows) data.push_back(read_vector(row, "A row"));
    a = Matrix::from_rows(data);
  } else {
    throw InvalidInput("problem: need either \"A\" or \"chain\"");
  }

  std::size_t target = p0.empty() ? 0 : p0.size() - 1;
  if (j.contains("target_index")) {
    if (!j["target_index"].is_number_integer()) throw InvalidInput("problem: target_index must be an integer");
    const long t = j["target_index"].get<long>();
    if (t < 1 || static_cast<std::size_t>(t) > p0.size()) throw InvalidInput("problem: target_index out of range");
    target = static_cast<std::size_t>(t - 1);
  }
  return ProblemSpec::make(std::move(a), std::move(p0), target, label);
}

std::string read_text(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path);
  std::ostringstream os;
  os << in.rdbuf();
  if (in.bad()) throw IoError("error reading " + path);
  return os.str();
}

void write_text(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write " + path);
  out << text;
  if (!out) throw IoError("error writing " + path);
}

ProblemSpec load_problem(const std::string& path) { return parse_problem(read_text(path)); }

Json to_json(const Vector& v) {
  Json j = Json::array();
  for (double x : v) j.push_back(json_number(x));
  return j;
}

Json to_json(const Matrix& m) {
  Json j = Json::array();
  for (const auto& row : m.to_rows()) j.push_back(to_json(row));
  return j;
}

Json to_json(const SymMatrix& m) { return to_json(m.full()); }

Json to_json(const ProblemSpec& spec) {
  Json j;
  j["label"] = spec.label;
  j["A"] = to_json(spec.A);
  j["p0"] = to_json(spec.p0);
  j["target_index"] = spec.target + 1;
  return j;
}

Json to_json(const ValidationReport& report) {
  Json j;
  j["ok"] = report.ok();
  j["negative_definite"] = report.negative_definite;
  j["irreducible"] = report.irreducible;
  j["nonnegative_p0"] = report.nonnegative_p0;
  j["max_symmetric_eigenvalue"] = json_number(report.max_symmetric_eigenvalue);
  j["messages"] = report.messages;
  return j;
}

Json to_json(const SdpSolution& sol) {
  Json j;
  j["status"] = to_string(sol.status);
  j["objective"] = json_number(sol.objective_value);
  j["dual_objective"] = json_number(sol.dual_objective);
  j["gap"] = json_number(sol.gap);
  j["primal_residual"] = json_number(sol.primal_residual);
  j["dual_residual"] = json_number(sol.dual_residual);
  j["iterations"] = sol.iterations;
  j["perturbed"] = sol.perturbed;
  j["diagnostics"] = sol.diagnostics;
  j["M"] = to_json(sol.M);
  j["dual_y"] = to_json(sol.dual_y);
  return j;
}

Json to_json(const CertReport& cert) {
  Json j;
  j["pass"] = cert.pass();
  j["min_eig_M"] = json_number(cert.min_eig_M);
  j["min_eig_Z"] = json_number(cert.min_eig_Z);
  j["gap"] = json_number(cert.gap);
  j["complementarity"] = json_number(cert.complementarity);
  j["residuals"] = to_json(cert.residuals);
  j["bound_slack"] = cert.bound_slack ? json_number(*cert.bound_slack) : Json(nullptr);
  j["failures"] = cert.failures;
  return j;
}

Json to_json(const RankReduction& red) {
  Json j;
  j["initial_rank"] = red.initial_rank;
  j["final_rank"] = red.final_rank;
  j["steps"] = red.steps;
  j["objective_drift"] = json_number(red.objective_drift);
  j["max_residual"] = json_number(red.max_residual);
  j["rank_one_completion"] = red.rank_one_completion;
  j["M"] = to_json(red.M);
  return j;
}

Json to_json(const ControlSchedule& schedule) {
  Json j;
  j["repetitions"] = schedule.repetitions;
  j["total_duration"] = json_number(schedule.total_duration);
  Json segs = Json::array();
  for (const auto& s : schedule.segments) {
    Json e;
    e["duration"] = json_number(s.duration);
    e["direction"] = to_json(s.direction);
    segs.push_back(e);
  }
  j["segments"] = segs;
  return j;
}

Json to_json(const FeedbackLaw& law) {
  Json j;
  j["total_duration"] = json_number(law.total_duration);
  Json segs = Json::array();
  for (const auto& s : law.segments) {
    Json e;
    e["pivot"] = s.pivot + 1;
    e["ratios"] = to_json(s.ratios);
    e["tprime_end"] = json_number(s.tprime_end);
    segs.push_back(e);
  }
  j["segments"] = segs;
  return j;
}

Json to_json(const ProbeReport& report) {
  Json j;
  j["seed"] = report.seed;
  j["count"] = report.count;
  Json dims = Json::array();
  for (const auto& d : report.dimensions) {
    Json e;
    e["n"] = d.n;
    e["solved"] = d.solved;
    e["failures"] = d.failures;
    e["bound_violations"] = d.bound_violations;
    e["max_drift"] = json_number(d.max_drift);
    e["rank_one_fraction"] = json_number(d.rank_one_fraction);
    Json hist = Json::object();
    for (const auto& [rank, c] : d.rank_histogram) hist[std::to_string(rank)] = c;
    e["rank_histogram"] = hist;
    dims.push_back(e);
  }
  j["dimensions"] = dims;
  Json failures = Json::array();
  for (const auto& inst : report.instances) {
    if (inst.solved) continue;
    failures.push_back({{"n", inst.n}, {"index", inst.index}, {"failure", inst.failure}});
  }
  j["failed_instances"] = failures;
  return j;
}

std::string dump(const Json& j) { return j.dump(2) + "\n"; }

std::string trajectory_csv(const Trajectory& traj) {
  const std::size_t width = traj.states.empty() ? 0 : traj.states.front().size();
  std::ostringstream os;
  os << "t,tprime";
  if (traj.space == SpaceTag::xy) {
    const std::size_t n = width / 2;
    for (std::size_t i = 1; i <= n; ++i) os << ",x_" << i;
    for (std::size_t i = 1; i <= n; ++i) os << ",y_" << i;
  } else {
    const char* name = traj.space == SpaceTag::p ? "p_" : "r_";
    for (std::size_t i = 1; i <= width; ++i) os << ',' << name << i;
  }
  const std::size_t cwidth = traj.controls.empty() ? 0 : traj.controls.front().size();
  const char* cname = traj.space == SpaceTag::xy ? "v_" : "u_";
  for (std::size_t i = 1; i <= cwidth; ++i) os << ',' << cname << i;
  os << ",U\n";
  for (std::size_t k = 0; k < traj.times.size(); ++k) {
    os << format_number(traj.times[k]) << ','
       << (k < traj.tprime.size() ? format_number(traj.tprime[k]) : std::string());
    for (double x : traj.states[k]) os << ',' << format_number(x);
    if (cwidth > 0)
      for (double x : traj.controls[k]) os << ',' << format_number(x);
    os << ',' << (k < traj.U.size() ? format_number(traj.U[k]) : std::string()) << '\n';
  }
  return os.str();
}

std::string reach_csv(const ReachSet& set, const ProblemSpec& spec) {
  std::ostringstream os;
  for (std::size_t i = 0; i < spec.n(); ++i)
    if (i != spec.target) os << "p_" << i + 1 << ',';
  os << "p_" << spec.target + 1 << "_max,feasible,rank\n";
  for (const auto& s : set.slices) {
    for (double b : s.base) os << format_number(b) << ',';
    os << (s.p_target_max ? format_number(*s.p_target_max) : std::string()) << ',' << (s.feasible() ? 1 : 0) << ','
       << s.solution_rank << '\n';
  }
  return os.str();
}

}  // namespace bilsdp
