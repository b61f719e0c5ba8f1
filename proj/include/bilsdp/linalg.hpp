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

// Small dense real linear algebra: general matrices, symmetric matrices with
// a cyclic Jacobi eigensolver, and Cholesky solves. Sized for n up to ~100.

#pragma once

#include <cstddef>
#include <initializer_list>
#include <span>
#include <vector>

namespace bilsdp {

using Vector = std::vector<double>;

/// Row-major dense matrix of arbitrary shape.
class Matrix {
 public:
  Matrix() = default;
  Matrix(std::size_t rows, std::size_t cols, double fill = 0.0);
  Matrix(std::initializer_list<std::initializer_list<double>> rows);

  static Matrix identity(std::size_t n);
  static Matrix from_rows(const std::vector<Vector>& rows);

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  bool is_square() const { return rows_ == cols_; }

  double& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
  double operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }

  std::span<const double> data() const { return data_; }

  Matrix transpose() const;
  Vector column(std::size_t j) const;
  std::vector<Vector> to_rows() const;

  Matrix& operator+=(const Matrix& other);
  Matrix& operator-=(const Matrix& other);
  Matrix& operator*=(double s);

  friend bool operator==(const Matrix&, const Matrix&) = default;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<double> data_;
};

Matrix operator+(Matrix a, const Matrix& b);
Matrix operator-(Matrix a, const Matrix& b);
Matrix operator*(Matrix a, double s);
Matrix operator*(double s, Matrix a);
Matrix operator*(const Matrix& a, const Matrix& b);
Vector operator*(const Matrix& a, std::span<const double> x);

double frobenius_norm(const Matrix& a);
double max_abs(const Matrix& a);

/// Dense symmetric n x n matrix. The full square is stored; every mutation
/// writes both (i,j) and (j,i), so symmetry holds exactly.
class SymMatrix {
 public:
  SymMatrix() = default;
  explicit SymMatrix(std::size_t n, double fill = 0.0);
  SymMatrix(std::initializer_list<std::initializer_list<double>> rows);

  /// Accepts a square matrix whose asymmetry is within `tol` (relative to its
  /// magnitude) and stores the symmetric part. Throws InvalidInput otherwise
  /// or on non-finite entries.
  static SymMatrix from_matrix(const Matrix& m, double tol = 1e-12);
  /// Symmetric part (m + m^T)/2 of any square matrix.
  static SymMatrix symmetric_part(const Matrix& m);
  static SymMatrix identity(std::size_t n);
  static SymMatrix diagonal(std::span<const double> d);
  /// v v^T
  static SymMatrix outer(std::span<const double> v);

  std::size_t n() const { return full_.rows(); }
  double operator()(std::size_t i, std::size_t j) const { return full_(i, j); }
  void set(std::size_t i, std::size_t j, double value);
  void add(std::size_t i, std::size_t j, double value);

  const Matrix& full() const { return full_; }
  double trace() const;
  bool all_finite() const;

  SymMatrix& operator+=(const SymMatrix& other);
  SymMatrix& operator-=(const SymMatrix& other);
  SymMatrix& operator*=(double s);

  friend bool operator==(const SymMatrix&, const SymMatrix&) = default;

 private:
  Matrix full_;
};

SymMatrix operator+(SymMatrix a, const SymMatrix& b);
SymMatrix operator-(SymMatrix a, const SymMatrix& b);
SymMatrix operator*(SymMatrix a, double s);
SymMatrix operator*(double s, SymMatrix a);
Vector operator*(const SymMatrix& a, std::span<const double> x);

/// Congruence b^T s b (b may be rectangular).
SymMatrix congruence(const Matrix& b, const SymMatrix& s);
/// Congruence b s b^T.
SymMatrix congruence_t(const Matrix& b, const SymMatrix& s);

/// tr(ab). The summation order depends only on the index pattern and uses
/// the products a_ij * b_ij, so trace_inner(a, b) == trace_inner(b, a) bit for bit.
double trace_inner(const SymMatrix& a, const SymMatrix& b);

struct SpectralDecomposition {
  Vector eigenvalues;  // descending
  Matrix eigenvectors;  // column k pairs with eigenvalues[k]

  std::size_t n() const { return eigenvalues.size(); }
  Vector vector(std::size_t k) const { return eigenvectors.column(k); }
  SymMatrix reconstruct() const;
  double min_eigenvalue() const { return eigenvalues.back(); }
  double max_eigenvalue() const { return eigenvalues.front(); }
};

struct LinalgConfig {
  int max_sweeps = 100;
  double tolerance = 1e-10;
};

/// Cyclic Jacobi rotations. Throws NumericFailure if the off-diagonal mass
/// has not vanished after `max_sweeps` sweeps, InvalidInput on non-finite input.
SpectralDecomposition spectral_decompose(const SymMatrix& s, const LinalgConfig& cfg = {});

/// True iff the largest eigenvalue is below -tol.
bool is_negative_definite(const SymMatrix& s, double tol);
bool is_positive_semidefinite(const SymMatrix& s, double tol);

/// Lower Cholesky factor L with s = L L^T; FactorizationError if s is not
/// numerically positive definite.
Matrix cholesky(const SymMatrix& s);
Vector solve_spd(const SymMatrix& s, std::span<const double> rhs);
/// Inverse of a lower-triangular matrix.
Matrix lower_triangular_inverse(const Matrix& l);

double dot(std::span<const double> a, std::span<const double> b);
double norm2(std::span<const double> a);
double norm_inf(std::span<const double> a);

}  // namespace bilsdp
