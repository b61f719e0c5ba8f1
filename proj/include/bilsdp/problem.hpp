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

// Problem instances for the dissipative bilinear transfer problem
//
//   dr_i/dt = sum_j a_ij u_i u_j r_j,   |u_i| <= 1,
//
// and the equivalent squared-radius system dp_i/dt' = sum_j 2 a_ij m_i m_j
// with unit direction m and rescaled time dt' = U^2 dt.

#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "bilsdp/linalg.hpp"

namespace bilsdp {

struct ProblemSpec {
  Matrix A;             // coupling matrix, square, generally non-symmetric
  Vector p0;            // initial squared radii, p0_i = r_i(0)^2
  std::size_t target = 0;  // 0-based index of the coordinate being maximized
  std::string label;

  std::size_t n() const { return p0.size(); }

  /// Tridiagonal chain: -xi on the diagonal, -1 above, +1 below. Target is
  /// the last coordinate.
  static ProblemSpec chain(std::size_t n, double xi, Vector p0, std::string label = {});
  /// Throws InvalidInput if shapes disagree or the target is out of range.
  static ProblemSpec make(Matrix A, Vector p0, std::size_t target, std::string label = {});
};

struct ValidationReport {
  bool negative_definite = false;  // A + A^T < 0
  bool irreducible = false;        // nonzero off-diagonal pattern strongly connected
  bool nonnegative_p0 = false;
  double max_symmetric_eigenvalue = 0.0;
  std::vector<std::string> messages;

  bool ok() const { return negative_definite && irreducible && nonnegative_p0; }
};

ValidationReport validate(const ProblemSpec& spec);

/// Strong connectivity of the directed graph with an edge i->j whenever
/// a_ij != 0, i != j.
bool is_irreducible(const Matrix& a);

/// The constraint matrices A_1..A_n: row/column i of A_i carries a_ij
/// off the diagonal and 2 a_ii on it, zero elsewhere.
struct ConstraintSet {
  std::vector<SymMatrix> matrices;  // one per coordinate, indexed like p
  Vector rhs;                       // rhs[i] = -p0_i (also filled at the target)
  std::size_t objective = 0;        // index of the maximized coordinate

  std::size_t n() const { return matrices.size(); }
  SymMatrix sum() const;
};

ConstraintSet build_constraints(const ProblemSpec& spec);

/// diag(-p0_i / (2 a_ii)): feasible for every constraint, including the
/// target row, whenever a_ii < 0.
SymMatrix feasible_seed(const ProblemSpec& spec);

/// Sum over non-target coordinates of p0, the upper bound on the SDP optimum.
double transfer_bound(const ProblemSpec& spec);

struct BilinearState {
  Vector x;
  Vector y;
  std::size_t n() const { return x.size(); }
};

struct RadialState {
  Vector r;
  std::size_t n() const { return r.size(); }
};

RadialState xy_to_r(const BilinearState& s);
Vector r_to_p(const RadialState& s);
/// Throws InvalidInput on a negative entry.
RadialState p_to_r(const Vector& p);

}  // namespace bilsdp
