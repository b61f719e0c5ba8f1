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

#include "bilsdp/lowrank.hpp"

#include <algorithm>
#include <cmath>
#include <exception>
#include <thread>

#include "bilsdp/error.hpp"

namespace bilsdp {

int numerical_rank(const SymMatrix& m, double rel_tol) {
  if (m.n() == 0) return 0;
  const SpectralDecomposition e = spectral_decompose(m);
  const double cut = rel_tol * std::max(e.max_eigenvalue(), 1e-300);
  return static_cast<int>(std::count_if(e.eigenvalues.begin(), e.eigenvalues.end(), [&](double l) { return l >= cut; }));
}

int general_rank_bound(std::size_t k) {
  int r = static_cast<int>(std::floor((std::sqrt(8.0 * static_cast<double>(k) + 1.0) - 1.0) / 2.0));
  // Guard the floor against rounding at perfect triangular numbers.
  while (static_cast<std::size_t>((r + 1) * (r + 2) / 2) <= k) ++r;
  while (r > 0 && static_cast<std::size_t>(r * (r + 1) / 2) > k) --r;
  return r;
}

int band_width(const Matrix& a) {
  int width = 1;
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j)
      if (a(i, j) != 0.0) width = std::max(width, 1 + static_cast<int>(i > j ? i - j : j - i));
  return width;
}

std::string to_string(RankRule rule) {
  switch (rule) {
    case RankRule::general: return "general";
    case RankRule::two_state: return "two-state";
    case RankRule::three_state: return "three-state";
    case RankRule::banded: return "banded";
  }
  return "unknown";
}

RankBoundReport rank_bound(const ProblemSpec& spec) {
  RankBoundReport rep;
  rep.n = spec.n();
  rep.general_bound = general_rank_bound(rep.n);
  if (rep.n == 2) {
    rep.special_bound = 1;
    rep.applicable_rule = RankRule::two_state;
  } else if (rep.n == 3) {
    rep.special_bound = 1;
    rep.applicable_rule = RankRule::three_state;
  }
  const int band = band_width(spec.A);
  if (band <= rep.general_bound && (!rep.special_bound || band < *rep.special_bound)) {
    rep.special_bound = band;
    rep.applicable_rule = RankRule::banded;
  }
  return rep;
}

namespace {

struct Factor {
  Matrix W;  // M = W W^T
  double residual = 0.0;
};

SymMatrix gram(const Matrix& w) {
  SymMatrix m(w.rows());
  for (std::size_t i = 0; i < w.rows(); ++i)
    for (std::size_t j = i; j < w.rows(); ++j) {
      double s = 0.0;
      for (std::size_t k = 0; k < w.cols(); ++k) s += w(i, k) * w(j, k);
      m.set(i, j, s);
    }
  return m;
}

double max_abs_residual(const std::vector<SymMatrix>& eqs, const Vector& targets, const SymMatrix& m) {
  double r = 0.0;
  for (std::size_t i = 0; i < eqs.size(); ++i) r = std::max(r, std::abs(trace_inner(eqs[i], m) - targets[i]));
  return r;
}

// Minimum-norm Gauss-Newton on <E_i, W W^T> = t_i. Directions whose
// singular value falls below `cut` times the largest are left alone.
Factor polish(Matrix w, const std::vector<SymMatrix>& eqs, const Vector& targets, double cut, int max_iter) {
  const std::size_t n = w.rows();
  const std::size_t r = w.cols();
  const std::size_t k = eqs.size();
  const double scale = 1.0 + norm_inf(targets);
  Factor f{w, max_abs_residual(eqs, targets, gram(w))};
  for (int it = 0; it < max_iter && f.residual > 1e-15 * scale; ++it) {
    const SymMatrix m = gram(f.W);
    Vector res(k);
    std::vector<Matrix> rows(k);
    for (std::size_t i = 0; i < k; ++i) {
      res[i] = trace_inner(eqs[i], m) - targets[i];
      rows[i] = (eqs[i].full() * f.W) * 2.0;
    }
    SymMatrix jjt(k);
    for (std::size_t i = 0; i < k; ++i)
      for (std::size_t j = i; j < k; ++j) {
        double s = 0.0;
        for (std::size_t e = 0; e < n * r; ++e) s += rows[i].data()[e] * rows[j].data()[e];
        jjt.set(i, j, s);
      }
    const SpectralDecomposition e = spectral_decompose(jjt);
    const double lmax = e.max_eigenvalue();
    if (lmax <= 0.0) break;
    // coef = pinv(J J^T) res
    Vector coef(k, 0.0);
    for (std::size_t q = 0; q < k; ++q) {
      const double l = e.eigenvalues[q];
      if (l <= cut * cut * lmax) continue;
      const Vector v = e.vector(q);
      const double c = dot(v, res) / l;
      for (std::size_t i = 0; i < k; ++i) coef[i] += c * v[i];
    }
    Matrix step(n, r);
    for (std::size_t i = 0; i < k; ++i) step += rows[i] * coef[i];
    Matrix next = f.W - step;
    const double next_res = max_abs_residual(eqs, targets, gram(next));
    if (!(next_res < f.residual)) break;
    f.W = std::move(next);
    f.residual = next_res;
  }
  return f;
}

// Orthonormal basis V (columns) and positive weights of the retained range.
struct Range {
  Matrix V;
  Vector weights;
  std::size_t rank() const { return weights.size(); }
};

Range truncate(const SpectralDecomposition& e, const Matrix& basis, double rel_tol, bool drop_smallest) {
  const double lmax = e.eigenvalues.empty() ? 0.0 : e.max_eigenvalue();
  std::size_t keep = 0;
  while (keep < e.n() && lmax > 0.0 && e.eigenvalues[keep] > rel_tol * lmax) ++keep;
  if (drop_smallest && keep == e.n() && keep > 0) --keep;
  Range out;
  out.weights.assign(e.eigenvalues.begin(), e.eigenvalues.begin() + static_cast<std::ptrdiff_t>(keep));
  Matrix u(e.n(), keep);
  for (std::size_t i = 0; i < e.n(); ++i)
    for (std::size_t j = 0; j < keep; ++j) u(i, j) = e.eigenvectors(i, j);
  out.V = basis * u;
  return out;
}

}  // namespace

RankReduction rank_reduce(const SdpProblem& problem, const SymMatrix& m, const ReduceConfig& cfg) {
  const std::size_t n = problem.n();
  if (m.n() != n) throw InvalidInput("rank_reduce: dimension mismatch");

  std::vector<SymMatrix> eqs = problem.constraints;
  eqs.push_back(problem.objective);
  Vector targets = problem.rhs;
  const double objective_in = trace_inner(problem.objective, m);
  targets.push_back(objective_in);
  const std::size_t k = eqs.size();

  RankReduction out;
  Range range = truncate(spectral_decompose(m), Matrix::identity(n), cfg.rank_tol, false);
  out.initial_rank = static_cast<int>(range.rank());

  while (range.rank() > 1) {
    const std::size_t r = range.rank();
    const double cond = range.weights.front() / range.weights.back();
    if (cond > cfg.max_condition) throw NumericFailure("rank_reduce: range of M is too ill-conditioned");

    // Row i: coefficients of <V^T E_i V, S> in the upper-triangular entries of S.
    const std::size_t q = r * (r + 1) / 2;
    std::vector<Vector> rows;
    for (const auto& e : eqs) {
      const SymMatrix proj = congruence(range.V, e);
      Vector row;
      row.reserve(q);
      for (std::size_t a = 0; a < r; ++a)
        for (std::size_t b = a; b < r; ++b) row.push_back(a == b ? proj(a, a) : 2.0 * proj(a, b));
      const double len = norm2(row);
      if (len == 0.0) continue;
      for (double& x : row) x /= len;
      rows.push_back(std::move(row));
    }
    SymMatrix jtj(q);
    for (const auto& row : rows)
      for (std::size_t a = 0; a < q; ++a)
        for (std::size_t b = a; b < q; ++b) jtj.add(a, b, row[a] * row[b]);
    const SpectralDecomposition ej = spectral_decompose(jtj);
    const double smax = std::sqrt(std::max(ej.max_eigenvalue(), 0.0));
    const double smin = std::sqrt(std::max(ej.min_eigenvalue(), 0.0));
    const bool has_kernel = rows.size() < q || smax == 0.0 || smin <= cfg.kernel_tol * smax;
    if (!has_kernel) break;

    const Vector sv = ej.vector(q - 1);
    SymMatrix s(r);
    for (std::size_t a = 0, idx = 0; a < r; ++a)
      for (std::size_t b = a; b < r; ++b) s.set(a, b, sv[idx++]);

    // Step to the boundary: T + t S singular, T = diag(weights).
    SymMatrix scaled(r);
    for (std::size_t a = 0; a < r; ++a)
      for (std::size_t b = a; b < r; ++b)
        scaled.set(a, b, s(a, b) / std::sqrt(range.weights[a] * range.weights[b]));
    const SpectralDecomposition es = spectral_decompose(scaled);
    const double mu = std::abs(es.max_eigenvalue()) >= std::abs(es.min_eigenvalue()) ? es.max_eigenvalue()
                                                                                      : es.min_eigenvalue();
    if (mu == 0.0) break;
    double t = -1.0 / mu;
    auto moved = [&](double step) {
      SymMatrix tm = SymMatrix::diagonal(range.weights);
      tm += s * step;
      return tm;
    };
    SymMatrix next = moved(t);
    SpectralDecomposition en = spectral_decompose(next);
    if (en.min_eigenvalue() < -1e-10 * en.max_eigenvalue()) {
      // Ill-conditioned generalized eigenproblem: bisect on the sign of the
      // smallest eigenvalue instead.
      double lo = 0.0, hi = t;
      for (int it = 0; it < 200; ++it) {
        const double mid = 0.5 * (lo + hi);
        if (spectral_decompose(moved(mid)).min_eigenvalue() >= 0.0) lo = mid; else hi = mid;
      }
      t = lo;
      next = moved(t);
      en = spectral_decompose(next);
    }
    range = truncate(en, range.V, cfg.rank_tol, true);
    ++out.steps;
  }

  // Fixpoint: with r(r+1)/2 > k the homogeneous system always has a kernel.
  if (range.rank() > 1 && range.rank() * (range.rank() + 1) / 2 > k) {
    throw NumericFailure("rank_reduce: stopped above the counting bound");
  }

  Matrix w(n, range.rank());
  for (std::size_t j = 0; j < range.rank(); ++j) {
    const double f = std::sqrt(range.weights[j]);
    for (std::size_t i = 0; i < n; ++i) w(i, j) = f * range.V(i, j);
  }
  const std::vector<SymMatrix> cons(eqs.begin(), eqs.end() - 1);
  const Vector cons_targets(targets.begin(), targets.end() - 1);
  const double scale = 1.0 + norm_inf(targets);
  auto objective_gap = [&](const Matrix& f) { return std::abs(trace_inner(problem.objective, gram(f)) - objective_in); };

  // Back onto the constraint manifold. At an optimum the objective gradient
  // lies in the span of the constraint gradients, so this moves the
  // objective only to second order.
  Factor best = polish(w, cons, cons_targets, 1e-12, 20);

  if (cfg.try_rank_one && range.rank() > 1) {
    // A rank-one point satisfying every constraint at the same objective
    // value is optimal too. Newton from the leading direction often finds one
    // when the linear walk has stalled at an extreme point of higher rank.
    const SpectralDecomposition eb = spectral_decompose(gram(best.W));
    Matrix lead(n, 1);
    const double f = std::sqrt(std::max(eb.max_eigenvalue(), 0.0));
    for (std::size_t i = 0; i < n; ++i) lead(i, 0) = f * eb.eigenvectors(i, 0);
    using System = std::pair<const std::vector<SymMatrix>*, const Vector*>;
    for (const System& sys : {System{&cons, &cons_targets}, System{&eqs, &targets}}) {
      const Factor one = polish(lead, *sys.first, *sys.second, 1e-10, 100);
      if (one.residual <= 1e-11 * scale && objective_gap(one.W) <= cfg.drift_tol) {
        best = one;
        out.rank_one_completion = true;
        break;
      }
    }
  }

  out.M = gram(best.W);
  out.final_rank = static_cast<int>(best.W.cols());
  if (out.final_rank > 0 && numerical_rank(out.M, cfg.rank_tol) < out.final_rank) {
    out.final_rank = numerical_rank(out.M, cfg.rank_tol);
  }
  out.objective_drift = std::abs(trace_inner(problem.objective, out.M) - objective_in);
  out.max_residual = 0.0;
  for (double v : constraint_residuals(problem, out.M)) out.max_residual = std::max(out.max_residual, std::abs(v));
  return out;
}

// ------------------------------------------------------------- random

std::mt19937_64 instance_rng(std::uint64_t seed, std::size_t n, std::size_t index) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(n), static_cast<std::uint32_t>(index)};
  return std::mt19937_64(seq);
}

ProblemSpec random_spec(std::size_t n, std::mt19937_64& rng) {
  std::normal_distribution<double> normal(0.0, 1.0);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  Matrix r(n, n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) r(i, j) = normal(rng);
  // Symmetric part -(R R^T / n + 0.1 I), plus a random skew part.
  Matrix a = (r * r.transpose()) * (-1.0 / static_cast<double>(n));
  for (std::size_t i = 0; i < n; ++i) a(i, i) -= 0.1;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j) {
      const double k = normal(rng);
      a(i, j) += k;
      a(j, i) -= k;
    }
  Vector p0(n);
  for (double& p : p0) p = unit(rng);
  return ProblemSpec::make(std::move(a), std::move(p0), n - 1, "random");
}

ProblemSpec random_tridiagonal_spec(std::size_t n, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> mag(0.2, 1.0);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::bernoulli_distribution coin(0.5);
  Matrix a(n, n);
  for (std::size_t i = 0; i + 1 < n; ++i) {
    a(i, i + 1) = (coin(rng) ? 1.0 : -1.0) * mag(rng);
    a(i + 1, i) = (coin(rng) ? 1.0 : -1.0) * mag(rng);
  }
  // Strict diagonal dominance of the symmetric part.
  for (std::size_t i = 0; i < n; ++i) {
    double off = 0.0;
    if (i > 0) off += std::abs(0.5 * (a(i, i - 1) + a(i - 1, i)));
    if (i + 1 < n) off += std::abs(0.5 * (a(i, i + 1) + a(i + 1, i)));
    a(i, i) = -(off + 0.05 + unit(rng));
  }
  Vector p0(n);
  for (double& p : p0) p = unit(rng);
  return ProblemSpec::make(std::move(a), std::move(p0), n - 1, "random-tridiagonal");
}

ProbeReport conjecture_probe(int count, std::size_t n_min, std::size_t n_max, std::uint64_t seed, int workers,
                             bool tridiagonal) {
  if (count < 0 || n_min < 2 || n_max < n_min) throw InvalidInput("conjecture_probe: bad range");
  ProbeReport report;
  report.seed = seed;
  report.count = count;
  for (std::size_t n = n_min; n <= n_max; ++n)
    for (int i = 0; i < count; ++i) {
      ProbeInstance inst;
      inst.n = n;
      inst.index = static_cast<std::size_t>(i);
      report.instances.push_back(inst);
    }

  auto run_one = [&](ProbeInstance& inst) {
    try {
      auto rng = instance_rng(seed, inst.n, inst.index);
      const ProblemSpec spec = tridiagonal ? random_tridiagonal_spec(inst.n, rng) : random_spec(inst.n, rng);
      const SdpProblem problem = make_sdp(spec);
      const SdpSolution sol = solve(problem);
      if (!sol.optimal()) {
        inst.failure = "solver status " + to_string(sol.status);
        return;
      }
      const CertReport cert = certify(problem, sol);
      inst.gap = cert.gap;
      for (double r : cert.residuals) inst.max_residual = std::max(inst.max_residual, std::abs(r));
      inst.bound_slack = cert.bound_slack.value_or(0.0);
      inst.certified = cert.pass();
      const RankReduction red = rank_reduce(problem, sol.M);
      inst.solved = true;
      inst.rank_before = red.initial_rank;
      inst.final_rank = red.final_rank;
      inst.objective = sol.objective_value;
      inst.objective_drift = red.objective_drift;
    } catch (const std::exception& e) {
      inst.failure = e.what();
    }
  };

  const std::size_t total = report.instances.size();
  const std::size_t threads = std::clamp<std::size_t>(static_cast<std::size_t>(std::max(workers, 1)), 1, total == 0 ? 1 : total);
  if (threads <= 1) {
    for (auto& inst : report.instances) run_one(inst);
  } else {
    std::vector<std::thread> pool;
    for (std::size_t t = 0; t < threads; ++t) {
      pool.emplace_back([&, t] {
        for (std::size_t i = t; i < total; i += threads) run_one(report.instances[i]);
      });
    }
    for (auto& th : pool) th.join();
  }

  for (std::size_t n = n_min; n <= n_max; ++n) {
    ProbeDimension dim;
    dim.n = n;
    int bound = general_rank_bound(n);
    if (n <= 3) bound = 1;
    if (tridiagonal) bound = std::min(bound, 2);
    int rank_one = 0;
    for (const auto& inst : report.instances) {
      if (inst.n != n) continue;
      if (!inst.solved) {
        ++dim.failures;
        continue;
      }
      ++dim.solved;
      ++dim.rank_histogram[inst.final_rank];
      if (inst.final_rank <= 1) ++rank_one;
      if (inst.final_rank > bound) ++dim.bound_violations;
      dim.max_drift = std::max(dim.max_drift, inst.objective_drift);
    }
    dim.rank_one_fraction = dim.solved == 0 ? 0.0 : static_cast<double>(rank_one) / dim.solved;
    report.dimensions.push_back(dim);
  }
  return report;
}

}  // namespace bilsdp
