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

#include "bilsdp/sdp.hpp"

#include <algorithm>
#include <cassert>
#include <cmath>
#include <cstdio>
#include <limits>
#include <sstream>

#include "bilsdp/error.hpp"

namespace bilsdp {

std::string to_string(SolveStatus status) {
  switch (status) {
    case SolveStatus::optimal: return "optimal";
    case SolveStatus::max_iterations: return "max-iterations";
    case SolveStatus::numeric_failure: return "numeric-failure";
    case SolveStatus::infeasible_detected: return "infeasible-detected";
    case SolveStatus::unbounded_detected: return "unbounded-detected";
  }
  return "unknown";
}

SdpProblem make_slice_sdp(const ProblemSpec& spec, const Vector& base) {
  const std::size_t n = spec.n();
  if (base.size() + 1 != n) throw InvalidInput("slice: base must have n-1 entries");
  const ConstraintSet set = build_constraints(spec);
  SdpProblem problem;
  problem.objective = set.matrices[set.objective];
  double bound = 0.0;
  std::size_t k = 0;
  for (std::size_t i = 0; i < n; ++i) {
    if (i == set.objective) continue;
    problem.constraints.push_back(set.matrices[i]);
    problem.rhs.push_back(base[k] - spec.p0[i]);
    bound -= base[k] - spec.p0[i];
    ++k;
  }
  problem.objective_bound = bound;
  return problem;
}

SdpProblem make_sdp(const ProblemSpec& spec) {
  Vector base(spec.n() - 1, 0.0);
  return make_slice_sdp(spec, base);
}

Vector constraint_residuals(const SdpProblem& problem, const SymMatrix& m) {
  Vector r(problem.num_constraints());
  for (std::size_t i = 0; i < r.size(); ++i) r[i] = trace_inner(problem.constraints[i], m) - problem.rhs[i];
  return r;
}

namespace {

SymMatrix adjoint(const std::vector<SymMatrix>& a, const Vector& y, std::size_t n) {
  SymMatrix out(n);
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (y[i] != 0.0) out += a[i] * y[i];
  }
  return out;
}

// Nesterov-Todd scaling: G with G^T Z G = G^{-1} X G^{-T} = diag(d).
struct Scaling {
  Matrix G;
  Vector d;
};

Scaling nt_scaling(const SymMatrix& x, const SymMatrix& z) {
  const std::size_t n = x.n();
  const SpectralDecomposition ex = spectral_decompose(x);
  if (ex.min_eigenvalue() <= 0.0) throw NumericFailure("primal iterate left the cone");
  Matrix xh(n, n);
  for (std::size_t k = 0; k < n; ++k) {
    const double s = std::sqrt(ex.eigenvalues[k]);
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j) xh(i, j) += s * ex.eigenvectors(i, k) * ex.eigenvectors(j, k);
  }
  const SpectralDecomposition ek = spectral_decompose(congruence(xh, z));
  if (ek.min_eigenvalue() <= 0.0) throw NumericFailure("dual iterate left the cone");
  Scaling sc;
  sc.d.resize(n);
  Matrix v = ek.eigenvectors;
  for (std::size_t k = 0; k < n; ++k) {
    sc.d[k] = std::sqrt(ek.eigenvalues[k]);
    const double f = 1.0 / std::sqrt(sc.d[k]);
    for (std::size_t i = 0; i < n; ++i) v(i, k) *= f;
  }
  sc.G = xh * v;
  return sc;
}

// Largest step alpha with diag(d) + alpha * delta still positive semidefinite.
double max_step(const Vector& d, const SymMatrix& delta) {
  const std::size_t n = d.size();
  SymMatrix s(n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i; j < n; ++j) s.set(i, j, delta(i, j) / std::sqrt(d[i] * d[j]));
  const double lmin = spectral_decompose(s).min_eigenvalue();
  return lmin < 0.0 ? -1.0 / lmin : std::numeric_limits<double>::infinity();
}

struct Direction {
  Vector dy;
  SymMatrix dx;  // scaled
  SymMatrix dz;  // scaled
};

struct NewtonSystem {
  std::vector<SymMatrix> scaled_a;
  SymMatrix scaled_rd;
  SymMatrix schur;
  Vector rp;

  Direction solve(const SymMatrix& rsc) const {
    const std::size_t m = scaled_a.size();
    const SymMatrix t = rsc + scaled_rd;
    Vector rhs(m);
    for (std::size_t i = 0; i < m; ++i) rhs[i] = trace_inner(scaled_a[i], t) - rp[i];
    Direction dir;
    dir.dy = m == 0 ? Vector{} : solve_spd(schur, rhs);
    dir.dz = adjoint(scaled_a, dir.dy, rsc.n()) - scaled_rd;
    dir.dx = rsc - dir.dz;
    return dir;
  }
};

struct RunResult {
  SdpSolution sol;
  bool stalled = false;
};

RunResult run(const SdpProblem& problem, const SolverConfig& cfg) {
  const std::size_t n = problem.n();
  const std::size_t m = problem.num_constraints();
  const SymMatrix& c = problem.objective;
  const Vector& b = problem.rhs;
  const double norm_b = 1.0 + norm2(b);
  const double norm_c = 1.0 + frobenius_norm(c.full());

  const double tau = 1.0 + norm_inf(b);
  SymMatrix x = SymMatrix::identity(n) * tau;
  SymMatrix z = SymMatrix::identity(n) * tau;
  Vector y(m, 0.0);

  RunResult out;
  SdpSolution& sol = out.sol;
  double best_merit = std::numeric_limits<double>::infinity();
  int last_improvement = 0;

  auto finish = [&](SolveStatus status, std::string why) {
    sol.status = status;
    sol.diagnostics = std::move(why);
    sol.M = x;
    sol.dual_y = y;
    sol.dual_slack = z;
  };

  for (int iter = 0;; ++iter) {
    sol.iterations = iter;
    const SymMatrix aty = adjoint(problem.constraints, y, n);
    const SymMatrix rd = c - aty + z;
    Vector rp(m);
    for (std::size_t i = 0; i < m; ++i) rp[i] = b[i] - trace_inner(problem.constraints[i], x);

    const double pobj = trace_inner(c, x);
    const double dobj = m == 0 ? 0.0 : dot(b, y);
    const double xz = trace_inner(x, z);
    const double mu = xz / static_cast<double>(n);
    const double denom = 1.0 + std::abs(pobj) + std::abs(dobj);
    const double rel_gap = std::max(std::abs(dobj - pobj), xz) / denom;
    const double pinf = norm2(rp) / norm_b;
    const double dinf = frobenius_norm(rd.full()) / norm_c;
    sol.objective_value = pobj;
    sol.dual_objective = dobj;
    sol.gap = rel_gap;
    sol.primal_residual = pinf;
    sol.dual_residual = dinf;

#ifndef NDEBUG
    // Weak duality: b^T y - <C, X> = <X, Z> - <X, Rd> + rp^T y.
    {
      const double slack = std::abs(trace_inner(x, rd)) + std::abs(m == 0 ? 0.0 : dot(rp, y));
      assert(dobj - pobj >= -slack - 1e-9 * denom);
    }
#endif

    if (cfg.verbose) {
      std::fprintf(stderr, "%3d  pobj % .10e  dobj % .10e  gap %.2e  pinf %.2e  dinf %.2e\n", iter, pobj, dobj, rel_gap,
                   pinf, dinf);
    }

    if (rel_gap <= cfg.gap_tol && pinf <= cfg.feas_tol && norm_inf(rp) <= cfg.feas_tol && dinf <= cfg.feas_tol) {
      finish(SolveStatus::optimal, "converged");
      return out;
    }
    if (problem.objective_bound && pinf <= 1e-6 && pobj > 1e3 * std::max(*problem.objective_bound, 1.0)) {
      finish(SolveStatus::unbounded_detected, "objective exceeds the transfer bound by 1e3x");
      return out;
    }
    if (m > 0 && dobj < -1e6 * norm_c) {
      // Farkas ray: sum y_i A_i >= 0 with b^T y < 0 proves primal infeasibility.
      const SymMatrix ray = aty * (1.0 / std::abs(dobj));
      if (spectral_decompose(ray).min_eigenvalue() >= -1e-6) {
        finish(SolveStatus::infeasible_detected, "dual ray certifies primal infeasibility");
        return out;
      }
    }
    if (iter >= cfg.max_iter) {
      finish(SolveStatus::max_iterations, "iteration cap reached");
      return out;
    }
    const double merit = std::max({rel_gap, pinf, dinf});
    if (merit < 0.5 * best_merit) {
      best_merit = merit;
      last_improvement = iter;
    } else if (iter - last_improvement >= cfg.stall_window) {
      out.stalled = true;
      finish(SolveStatus::max_iterations, "progress stalled");
      return out;
    }

    try {
      const Scaling sc = nt_scaling(x, z);
      NewtonSystem sys;
      sys.rp = rp;
      sys.scaled_rd = congruence(sc.G, rd);
      sys.scaled_a.reserve(m);
      for (const auto& a : problem.constraints) sys.scaled_a.push_back(congruence(sc.G, a));
      sys.schur = SymMatrix(m);
      for (std::size_t i = 0; i < m; ++i)
        for (std::size_t j = i; j < m; ++j) sys.schur.set(i, j, trace_inner(sys.scaled_a[i], sys.scaled_a[j]));

      const Vector& d = sc.d;
      auto step_lengths = [&](const Direction& dir) {
        const double ap = std::min(1.0, cfg.step_fraction * max_step(d, dir.dx));
        const double ad = std::min(1.0, cfg.step_fraction * max_step(d, dir.dz));
        return std::pair{ap, ad};
      };

      // Predictor (affine scaling, sigma = 0).
      SymMatrix rsc(n);
      for (std::size_t i = 0; i < n; ++i) rsc.set(i, i, -d[i]);
      const Direction aff = sys.solve(rsc);
      const auto [ap_aff, ad_aff] = step_lengths(aff);
      SymMatrix xa = SymMatrix::diagonal(d) + aff.dx * ap_aff;
      SymMatrix za = SymMatrix::diagonal(d) + aff.dz * ad_aff;
      const double mu_aff = trace_inner(xa, za) / static_cast<double>(n);
      const double sigma = std::clamp(std::pow(mu_aff / mu, 3.0), 0.0, 1.0);

      // Corrector: sym(D (dX + dZ)) = sigma mu I - D^2 - sym(dXa dZa).
      const SymMatrix second = SymMatrix::symmetric_part(aff.dx.full() * aff.dz.full());
      for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = i; j < n; ++j) {
          double r = -second(i, j);
          if (i == j) r += sigma * mu - d[i] * d[i];
          rsc.set(i, j, 2.0 * r / (d[i] + d[j]));
        }
      }
      const Direction dir = sys.solve(rsc);
      const auto [ap, ad] = step_lengths(dir);

      x += congruence_t(sc.G, dir.dx) * ap;
      for (std::size_t i = 0; i < m; ++i) y[i] += ad * dir.dy[i];
      z += (adjoint(problem.constraints, dir.dy, n) - rd) * ad;
    } catch (const NumericFailure& e) {
      finish(SolveStatus::numeric_failure, e.what());
      return out;
    }
  }
}

}  // namespace

SdpSolution solve(const SdpProblem& problem, const SolverConfig& cfg) {
  const std::size_t n = problem.n();
  if (n == 0) throw InvalidInput("solve: empty problem");
  if (problem.rhs.size() != problem.num_constraints()) throw InvalidInput("solve: rhs length mismatch");
  for (const auto& a : problem.constraints)
    if (a.n() != n) throw InvalidInput("solve: constraint dimension mismatch");

  RunResult first = run(problem, cfg);
  const bool has_zero_rhs = std::any_of(problem.rhs.begin(), problem.rhs.end(), [](double v) { return v == 0.0; });
  if (!first.stalled || !has_zero_rhs) return first.sol;

  // Strict feasibility can fail when a coordinate starts at zero; retry once
  // with those right-hand sides nudged off zero.
  SdpProblem nudged = problem;
  for (double& v : nudged.rhs)
    if (v == 0.0) v = -cfg.degenerate_delta;
  RunResult second = run(nudged, cfg);
  second.sol.perturbed = true;
  std::ostringstream os;
  os << second.sol.diagnostics << " (zero right-hand sides replaced by " << -cfg.degenerate_delta << " after stall)";
  second.sol.diagnostics = os.str();
  return second.sol;
}

CertReport certify(const SdpProblem& problem, const SdpSolution& sol, const CertConfig& cfg) {
  CertReport rep;
  const std::size_t n = problem.n();
  const double norm_b = 1.0 + norm2(problem.rhs);
  const double norm_c = 1.0 + frobenius_norm(problem.objective.full());

  rep.min_eig_M = spectral_decompose(sol.M).min_eigenvalue();
  rep.residuals = constraint_residuals(problem, sol.M);
  rep.primal_feasible = rep.min_eig_M >= -cfg.psd_floor;
  if (!rep.primal_feasible) rep.failures.emplace_back("M is not positive semidefinite");
  for (std::size_t i = 0; i < rep.residuals.size(); ++i) {
    if (std::abs(rep.residuals[i]) > cfg.residual_tol * norm_b) {
      rep.violated_constraints.push_back(i);
      rep.primal_feasible = false;
      std::ostringstream os;
      os << "constraint " << i << " violated by " << rep.residuals[i];
      rep.failures.push_back(os.str());
    }
  }

  Vector y = sol.dual_y;
  y.resize(problem.num_constraints(), 0.0);
  const SymMatrix z = adjoint(problem.constraints, y, n) - problem.objective;
  rep.min_eig_Z = spectral_decompose(z).min_eigenvalue();
  rep.dual_feasible = rep.min_eig_Z >= -cfg.dual_floor * norm_c;
  if (!rep.dual_feasible) rep.failures.emplace_back("dual slack Z is not positive semidefinite");

  const double pobj = trace_inner(problem.objective, sol.M);
  const double dobj = y.empty() ? 0.0 : dot(problem.rhs, y);
  rep.complementarity = trace_inner(sol.M, z);
  rep.gap = std::abs(dobj - pobj) / (1.0 + std::abs(pobj) + std::abs(dobj));
  rep.gap_ok = rep.gap <= cfg.gap_tol;
  if (!rep.gap_ok) rep.failures.emplace_back("duality gap above tolerance");

  if (problem.objective_bound) {
    rep.bound_slack = *problem.objective_bound - pobj;
    rep.bound_ok = *rep.bound_slack >= -cfg.bound_tol;
    if (!rep.bound_ok) rep.failures.emplace_back("objective exceeds the transfer bound");
  }
  return rep;
}

}  // namespace bilsdp
