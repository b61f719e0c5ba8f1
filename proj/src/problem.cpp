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

#include "bilsdp/problem.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <sstream>

#include "bilsdp/error.hpp"

namespace bilsdp {

ProblemSpec ProblemSpec::make(Matrix A, Vector p0, std::size_t target, std::string label) {
  if (!A.is_square()) throw InvalidInput("problem: coupling matrix is not square");
  if (A.rows() != p0.size()) throw InvalidInput("problem: p0 length does not match A");
  if (A.rows() == 0) throw InvalidInput("problem: empty system");
  if (target >= p0.size()) throw InvalidInput("problem: target index out of range");
  for (double x : A.data())
    if (!std::isfinite(x)) throw InvalidInput("problem: non-finite entry in A");
  for (double x : p0)
    if (!std::isfinite(x)) throw InvalidInput("problem: non-finite entry in p0");
  return ProblemSpec{std::move(A), std::move(p0), target, std::move(label)};
}

ProblemSpec ProblemSpec::chain(std::size_t n, double xi, Vector p0, std::string label) {
  Matrix a(n, n);
  for (std::size_t i = 0; i < n; ++i) {
    a(i, i) = -xi;
    if (i + 1 < n) {
      a(i, i + 1) = -1.0;
      a(i + 1, i) = 1.0;
    }
  }
  return make(std::move(a), std::move(p0), n - 1, std::move(label));
}

bool is_irreducible(const Matrix& a) {
  const std::size_t n = a.rows();
  if (n <= 1) return true;
  // Tarjan's algorithm; irreducible iff exactly one strongly connected component.
  std::vector<int> index(n, -1), low(n, 0);
  std::vector<bool> on_stack(n, false);
  std::vector<std::size_t> stack;
  int counter = 0;
  int components = 0;
  std::function<void(std::size_t)> visit = [&](std::size_t v) {
    index[v] = low[v] = counter++;
    stack.push_back(v);
    on_stack[v] = true;
    for (std::size_t w = 0; w < n; ++w) {
      if (w == v || a(v, w) == 0.0) continue;
      if (index[w] < 0) {
        visit(w);
        low[v] = std::min(low[v], low[w]);
      } else if (on_stack[w]) {
        low[v] = std::min(low[v], index[w]);
      }
    }
    if (low[v] == index[v]) {
      ++components;
      std::size_t w;
      do {
        w = stack.back();
        stack.pop_back();
        on_stack[w] = false;
      } while (w != v);
    }
  };
  for (std::size_t v = 0; v < n; ++v)
    if (index[v] < 0) visit(v);
  return components == 1;
}

ValidationReport validate(const ProblemSpec& spec) {
  ValidationReport report;
  const SymMatrix sym = SymMatrix::symmetric_part(spec.A) * 2.0;
  report.max_symmetric_eigenvalue = spectral_decompose(sym).max_eigenvalue();
  report.negative_definite = is_negative_definite(sym, 1e-12);
  if (!report.negative_definite) {
    std::ostringstream os;
    os << "A + A^T is not negative definite (largest eigenvalue " << report.max_symmetric_eigenvalue << ")";
    report.messages.push_back(os.str());
  }
  report.irreducible = is_irreducible(spec.A);
  if (!report.irreducible) {
    report.messages.emplace_back("A is not irreducible: the coupling graph is not strongly connected");
  }
  report.nonnegative_p0 = std::all_of(spec.p0.begin(), spec.p0.end(), [](double p) { return p >= 0.0; });
  if (!report.nonnegative_p0) report.messages.emplace_back("p0 has a negative entry");
  return report;
}

SymMatrix ConstraintSet::sum() const {
  SymMatrix total(matrices.empty() ? 0 : matrices.front().n());
  for (const auto& m : matrices) total += m;
  return total;
}

ConstraintSet build_constraints(const ProblemSpec& spec) {
  const std::size_t n = spec.n();
  ConstraintSet set;
  set.objective = spec.target;
  set.matrices.reserve(n);
  set.rhs.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    SymMatrix ai(n);
    for (std::size_t j = 0; j < n; ++j) {
      if (j == i) {
        ai.set(i, i, 2.0 * spec.A(i, i));
      } else {
        ai.set(i, j, spec.A(i, j));
      }
    }
    set.matrices.push_back(std::move(ai));
    set.rhs[i] = -spec.p0[i];
  }
  return set;
}

SymMatrix feasible_seed(const ProblemSpec& spec) {
  const std::size_t n = spec.n();
  Vector d(n, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    if (spec.p0[i] != 0.0) d[i] = -spec.p0[i] / (2.0 * spec.A(i, i));
  }
  return SymMatrix::diagonal(d);
}

double transfer_bound(const ProblemSpec& spec) {
  double s = 0.0;
  for (std::size_t i = 0; i < spec.n(); ++i)
    if (i != spec.target) s += spec.p0[i];
  return s;
}

RadialState xy_to_r(const BilinearState& s) {
  if (s.x.size() != s.y.size()) throw InvalidInput("xy_to_r: x and y lengths differ");
  RadialState out;
  out.r.resize(s.x.size());
  for (std::size_t i = 0; i < s.x.size(); ++i) out.r[i] = std::hypot(s.x[i], s.y[i]);
  return out;
}

Vector r_to_p(const RadialState& s) {
  Vector p(s.r.size());
  for (std::size_t i = 0; i < p.size(); ++i) p[i] = s.r[i] * s.r[i];
  return p;
}

RadialState p_to_r(const Vector& p) {
  RadialState out;
  out.r.resize(p.size());
  for (std::size_t i = 0; i < p.size(); ++i) {
    if (p[i] < 0.0) throw InvalidInput("p_to_r: negative squared radius");
    out.r[i] = std::sqrt(p[i]);
  }
  return out;
}

}  // namespace bilsdp
