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

#include <pybind11/functional.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "bilsdp/error.hpp"
#include "bilsdp/io.hpp"
#include "bilsdp/lowrank.hpp"
#include "bilsdp/oracles.hpp"
#include "bilsdp/pipeline.hpp"
#include "bilsdp/reachable.hpp"
#include "bilsdp/simulate.hpp"

namespace py = pybind11;
using namespace bilsdp;

namespace {

std::vector<Vector> rows(const Matrix& m) { return m.to_rows(); }

ProblemSpec make_spec(const std::vector<Vector>& a, const Vector& p0, std::optional<std::size_t> target,
                      const std::string& label) {
  const std::size_t t = target ? *target : (p0.empty() ? 0 : p0.size() - 1);
  return ProblemSpec::make(Matrix::from_rows(a), p0, t, label);
}

py::dict trajectory_dict(const Trajectory& t) {
  py::dict d;
  d["space"] = to_string(t.space);
  d["status"] = to_string(t.status);
  d["diagnostics"] = t.diagnostics;
  d["t"] = t.times;
  d["tprime"] = t.tprime;
  d["states"] = t.states;
  d["controls"] = t.controls;
  d["U"] = t.U;
  return d;
}

std::string report_json(const RunReport& rep) {
  Json j;
  j["problem"] = to_json(rep.spec);
  j["validation"] = to_json(rep.validation);
  j["solution"] = to_json(rep.solution);
  j["certificate"] = to_json(rep.certificate);
  if (rep.reduction) j["reduction"] = to_json(*rep.reduction);
  j["M"] = to_json(rep.M);
  j["transfer"] = json_number(rep.transfer);
  j["target_radius_max"] = json_number(rep.target_radius_max);
  j["repetitions"] = rep.repetitions.repetitions;
  j["schedule"] = to_json(rep.schedule);
  j["law"] = to_json(rep.law);
  return j.dump();
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Optimal transfer in dissipative bilinear systems through semidefinite programming";

  py::register_exception<InvalidInput>(m, "InvalidInput", PyExc_ValueError);
  py::register_exception<IoError>(m, "IoError", PyExc_OSError);
  py::register_exception<NumericFailure>(m, "NumericFailure", PyExc_ArithmeticError);

  py::class_<ProblemSpec>(m, "Problem")
      .def(py::init(&make_spec), py::arg("A"), py::arg("p0"), py::arg("target") = py::none(),
           py::arg("label") = "")
      .def_static("chain", &ProblemSpec::chain, py::arg("n"), py::arg("xi"), py::arg("p0"), py::arg("label") = "")
      .def_static("parse", &parse_problem, py::arg("text"))
      .def_static("load", &load_problem, py::arg("path"))
      .def_property_readonly("A", [](const ProblemSpec& s) { return rows(s.A); })
      .def_property_readonly("p0", [](const ProblemSpec& s) { return s.p0; })
      .def_property_readonly("target", [](const ProblemSpec& s) { return s.target; })
      .def_property_readonly("label", [](const ProblemSpec& s) { return s.label; })
      .def_property_readonly("n", &ProblemSpec::n)
      .def("to_json", [](const ProblemSpec& s) { return to_json(s).dump(); })
      .def("__repr__", [](const ProblemSpec& s) { return "<Problem n=" + std::to_string(s.n()) + ">"; });

  m.def("_validate", [](const ProblemSpec& s) { return to_json(validate(s)).dump(); });
  m.def("transfer_bound", &transfer_bound);

  m.def(
      "_analyze",
      [](const ProblemSpec& s, double gap_tol) {
        PipelineConfig cfg;
        cfg.solver.gap_tol = gap_tol;
        py::gil_scoped_release release;
        return report_json(analyze(s, cfg));
      },
      py::arg("problem"), py::arg("gap_tol") = 1e-8);

  m.def(
      "simulate",
      [](const ProblemSpec& s, double kick, double horizon) {
        ClosedLoopRun run;
        {
          py::gil_scoped_release release;
          const RunReport rep = analyze(s);
          run = run_closed_loop(s, rep.law, kick, horizon);
        }
        py::dict d;
        d["r0"] = run.r0.r;
        d["kick"] = run.kick;
        d["horizon"] = run.horizon;
        d["r"] = trajectory_dict(run.r);
        d["xy"] = trajectory_dict(run.xy);
        d["sup_distance"] = radial_sup_distance(run.r, run.xy);
        return d;
      },
      py::arg("problem"), py::arg("kick") = 0.0, py::arg("horizon") = 0.0,
      "Closed-loop radial and bilinear runs under the synthesized feedback law.");

  m.def(
      "reach_slice",
      [](const ProblemSpec& s, const Vector& base) -> std::optional<double> {
        return reach_slice(s, base).p_target_max;
      },
      py::arg("problem"), py::arg("base"));

  m.def(
      "reach_set",
      [](const ProblemSpec& s, std::optional<std::vector<Vector>> axes, int points, int workers) {
        std::vector<Vector> grid = axes ? *axes : default_axes(s, points);
        ReachSet set;
        {
          py::gil_scoped_release release;
          set = reach_set(s, grid, workers);
        }
        py::list out;
        for (const auto& slice : set.slices) out.append(py::make_tuple(slice.base, slice.p_target_max));
        return out;
      },
      py::arg("problem"), py::arg("axes") = py::none(), py::arg("points") = 21, py::arg("workers") = 1);

  m.def(
      "_probe",
      [](int count, std::size_t n_min, std::size_t n_max, std::uint64_t seed, int workers, bool tridiagonal) {
        py::gil_scoped_release release;
        return to_json(conjecture_probe(count, n_min, n_max, seed, workers, tridiagonal)).dump();
      },
      py::arg("count"), py::arg("n_min"), py::arg("n_max"), py::arg("seed") = 1, py::arg("workers") = 1,
      py::arg("tridiagonal") = false);

  m.def(
      "reproduce",
      [](const std::string& which) {
        py::list out;
        for (const auto& row : reproduce(which)) {
          py::dict d;
          d["example"] = row.example;
          d["quantity"] = row.quantity;
          d["reference"] = row.reference;
          d["computed"] = row.computed;
          d["tolerance"] = row.tolerance;
          d["pass"] = row.pass();
          out.append(d);
        }
        return out;
      },
      py::arg("which") = "all");

  m.def("analytic_2x2", [](double xi) {
    const ClosedForm2x2 c = analytic_2x2(xi);
    py::dict d;
    d["xi"] = c.xi;
    d["x0"] = c.x0;
    d["efficiency"] = c.efficiency;
    d["p_gain"] = c.p_gain;
    return d;
  });
  m.def("analytic_3chain", [](double xi) {
    const ClosedForm3Chain c = analytic_3chain(xi);
    py::dict d;
    d["xi"] = c.xi;
    d["x0"] = c.x0;
    d["y0"] = c.y0;
    d["f_max"] = c.f_max;
    d["efficiency"] = c.efficiency;
    return d;
  });
}
