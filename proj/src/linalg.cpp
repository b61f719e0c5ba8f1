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

#include "bilsdp/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "bilsdp/error.hpp"

namespace bilsdp {

namespace {

void require_same_shape(const Matrix& a, const Matrix& b, const char* what) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) {
    throw InvalidInput(std::string(what) + ": dimension mismatch");
  }
}

}  // namespace

// ---------------------------------------------------------------- Matrix

Matrix::Matrix(std::size_t rows, std::size_t cols, double fill)
    : rows_(rows), cols_(cols), data_(rows * cols, fill) {}

Matrix::Matrix(std::initializer_list<std::initializer_list<double>> rows) {
  rows_ = rows.size();
  cols_ = rows_ == 0 ? 0 : rows.begin()->size();
  data_.reserve(rows_ * cols_);
  for (const auto& r : rows) {
    if (r.size() != cols_) throw InvalidInput("Matrix: ragged initializer");
    data_.insert(data_.end(), r.begin(), r.end());
  }
}

Matrix Matrix::identity(std::size_t n) {
  Matrix m(n, n);
  for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
  return m;
}

Matrix Matrix::from_rows(const std::vector<Vector>& rows) {
  const std::size_t r = rows.size();
  const std::size_t c = r == 0 ? 0 : rows.front().size();
  Matrix m(r, c);
  for (std::size_t i = 0; i < r; ++i) {
    if (rows[i].size() != c) throw InvalidInput("Matrix: ragged rows");
    std::copy(rows[i].begin(), rows[i].end(), m.data_.begin() + static_cast<std::ptrdiff_t>(i * c));
  }
  return m;
}

Matrix Matrix::transpose() const {
  Matrix t(cols_, rows_);
  for (std::size_t i = 0; i < rows_; ++i)
    for (std::size_t j = 0; j < cols_; ++j) t(j, i) = (*this)(i, j);
  return t;
}

Vector Matrix::column(std::size_t j) const {
  Vector v(rows_);
  for (std::size_t i = 0; i < rows_; ++i) v[i] = (*this)(i, j);
  return v;
}

std::vector<Vector> Matrix::to_rows() const {
  std::vector<Vector> out(rows_);
  for (std::size_t i = 0; i < rows_; ++i) {
    auto first = data_.begin() + static_cast<std::ptrdiff_t>(i * cols_);
    out[i].assign(first, first + static_cast<std::ptrdiff_t>(cols_));
  }
  return out;
}

Matrix& Matrix::operator+=(const Matrix& other) {
  require_same_shape(*this, other, "Matrix +=");
  for (std::size_t k = 0; k < data_.size(); ++k) data_[k] += other.data_[k];
  return *this;
}

Matrix& Matrix::operator-=(const Matrix& other) {
  require_same_shape(*this, other, "Matrix -=");
  for (std::size_t k = 0; k < data_.size(); ++k) data_[k] -= other.data_[k];
  return *this;
}

Matrix& Matrix::operator*=(double s) {
  for (double& x : data_) x *= s;
  return *this;
}

Matrix operator+(Matrix a, const Matrix& b) { return a += b; }
Matrix operator-(Matrix a, const Matrix& b) { return a -= b; }
Matrix operator*(Matrix a, double s) { return a *= s; }
Matrix operator*(double s, Matrix a) { return a *= s; }

Matrix operator*(const Matrix& a, const Matrix& b) {
  if (a.cols() != b.rows()) throw InvalidInput("Matrix product: dimension mismatch");
  Matrix c(a.rows(), b.cols());
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t k = 0; k < a.cols(); ++k) {
      const double aik = a(i, k);
      if (aik == 0.0) continue;
      for (std::size_t j = 0; j < b.cols(); ++j) c(i, j) += aik * b(k, j);
    }
  return c;
}

Vector operator*(const Matrix& a, std::span<const double> x) {
  if (a.cols() != x.size()) throw InvalidInput("Matrix-vector product: dimension mismatch");
  Vector y(a.rows(), 0.0);
  for (std::size_t i = 0; i < a.rows(); ++i) {
    double s = 0.0;
    for (std::size_t j = 0; j < a.cols(); ++j) s += a(i, j) * x[j];
    y[i] = s;
  }
  return y;
}

double frobenius_norm(const Matrix& a) {
  double s = 0.0;
  for (double x : a.data()) s += x * x;
  return std::sqrt(s);
}

double max_abs(const Matrix& a) {
  double m = 0.0;
  for (double x : a.data()) m = std::max(m, std::abs(x));
  return m;
}

// ------------------------------------------------------------- SymMatrix

SymMatrix::SymMatrix(std::size_t n, double fill) : full_(n, n, fill) {}

SymMatrix::SymMatrix(std::initializer_list<std::initializer_list<double>> rows)
    : SymMatrix(from_matrix(Matrix(rows))) {}

SymMatrix SymMatrix::from_matrix(const Matrix& m, double tol) {
  if (!m.is_square()) throw InvalidInput("SymMatrix: matrix is not square");
  const double scale = 1.0 + max_abs(m);
  SymMatrix s(m.rows());
  for (std::size_t i = 0; i < m.rows(); ++i) {
    for (std::size_t j = i; j < m.cols(); ++j) {
      if (!std::isfinite(m(i, j)) || !std::isfinite(m(j, i))) {
        throw InvalidInput("SymMatrix: non-finite entry");
      }
      if (std::abs(m(i, j) - m(j, i)) > tol * scale) {
        throw InvalidInput("SymMatrix: matrix is not symmetric");
      }
      s.set(i, j, 0.5 * (m(i, j) + m(j, i)));
    }
  }
  return s;
}

SymMatrix SymMatrix::symmetric_part(const Matrix& m) {
  if (!m.is_square()) throw InvalidInput("SymMatrix: matrix is not square");
  SymMatrix s(m.rows());
  for (std::size_t i = 0; i < m.rows(); ++i)
    for (std::size_t j = i; j < m.cols(); ++j) s.set(i, j, 0.5 * (m(i, j) + m(j, i)));
  return s;
}

SymMatrix SymMatrix::identity(std::size_t n) {
  SymMatrix s(n);
  for (std::size_t i = 0; i < n; ++i) s.set(i, i, 1.0);
  return s;
}

SymMatrix SymMatrix::diagonal(std::span<const double> d) {
  SymMatrix s(d.size());
  for (std::size_t i = 0; i < d.size(); ++i) s.set(i, i, d[i]);
  return s;
}

SymMatrix SymMatrix::outer(std::span<const double> v) {
  SymMatrix s(v.size());
  for (std::size_t i = 0; i < v.size(); ++i)
    for (std::size_t j = i; j < v.size(); ++j) s.set(i, j, v[i] * v[j]);
  return s;
}

void SymMatrix::set(std::size_t i, std::size_t j, double value) {
  full_(i, j) = value;
  full_(j, i) = value;
}

void SymMatrix::add(std::size_t i, std::size_t j, double value) {
  full_(i, j) += value;
  if (i != j) full_(j, i) += value;
}

double SymMatrix::trace() const {
  double t = 0.0;
  for (std::size_t i = 0; i < n(); ++i) t += full_(i, i);
  return t;
}

bool SymMatrix::all_finite() const {
  return std::all_of(full_.data().begin(), full_.data().end(), [](double x) { return std::isfinite(x); });
}

SymMatrix& SymMatrix::operator+=(const SymMatrix& other) {
  full_ += other.full_;
  return *this;
}

SymMatrix& SymMatrix::operator-=(const SymMatrix& other) {
  full_ -= other.full_;
  return *this;
}

SymMatrix& SymMatrix::operator*=(double s) {
  full_ *= s;
  return *this;
}

SymMatrix operator+(SymMatrix a, const SymMatrix& b) { return a += b; }
SymMatrix operator-(SymMatrix a, const SymMatrix& b) { return a -= b; }
SymMatrix operator*(SymMatrix a, double s) { return a *= s; }
SymMatrix operator*(double s, SymMatrix a) { return a *= s; }

Vector operator*(const SymMatrix& a, std::span<const double> x) { return a.full() * x; }

SymMatrix congruence(const Matrix& b, const SymMatrix& s) {
  return SymMatrix::symmetric_part(b.transpose() * (s.full() * b));
}

SymMatrix congruence_t(const Matrix& b, const SymMatrix& s) {
  return SymMatrix::symmetric_part(b * (s.full() * b.transpose()));
}

double trace_inner(const SymMatrix& a, const SymMatrix& b) {
  if (a.n() != b.n()) throw InvalidInput("trace_inner: dimension mismatch");
  double s = 0.0;
  for (std::size_t i = 0; i < a.n(); ++i) {
    s += a(i, i) * b(i, i);
    for (std::size_t j = i + 1; j < a.n(); ++j) s += 2.0 * (a(i, j) * b(i, j));
  }
  return s;
}

// ------------------------------------------------------------ spectral

SymMatrix SpectralDecomposition::reconstruct() const {
  const std::size_t n = eigenvalues.size();
  SymMatrix out(n);
  for (std::size_t k = 0; k < n; ++k) {
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = i; j < n; ++j)
        out.add(i, j, eigenvalues[k] * eigenvectors(i, k) * eigenvectors(j, k));
  }
  return out;
}

SpectralDecomposition spectral_decompose(const SymMatrix& s, const LinalgConfig& cfg) {
  if (!s.all_finite()) throw InvalidInput("spectral_decompose: non-finite entry");
  const std::size_t n = s.n();
  Matrix a = s.full();
  Matrix v = Matrix::identity(n);
  Vector d(n), b(n), z(n, 0.0);
  for (std::size_t i = 0; i < n; ++i) d[i] = b[i] = a(i, i);

  bool converged = n <= 1;
  for (int sweep = 0; sweep < cfg.max_sweeps && !converged; ++sweep) {
    double off = 0.0;
    for (std::size_t p = 0; p < n; ++p)
      for (std::size_t q = p + 1; q < n; ++q) off += std::abs(a(p, q));
    if (off == 0.0) {
      converged = true;
      break;
    }
    const double threshold = sweep < 3 ? 0.2 * off / static_cast<double>(n * n) : 0.0;
    for (std::size_t p = 0; p + 1 < n; ++p) {
      for (std::size_t q = p + 1; q < n; ++q) {
        const double g = 100.0 * std::abs(a(p, q));
        // Off-diagonal element negligible against both diagonals: drop it.
        if (sweep > 3 && std::abs(d[p]) + g == std::abs(d[p]) && std::abs(d[q]) + g == std::abs(d[q])) {
          a(p, q) = 0.0;
          continue;
        }
        if (std::abs(a(p, q)) <= threshold) continue;
        double h = d[q] - d[p];
        double t;
        if (std::abs(h) + g == std::abs(h)) {
          t = a(p, q) / h;
        } else {
          const double theta = 0.5 * h / a(p, q);
          t = 1.0 / (std::abs(theta) + std::sqrt(1.0 + theta * theta));
          if (theta < 0.0) t = -t;
        }
        const double c = 1.0 / std::sqrt(1.0 + t * t);
        const double sn = t * c;
        const double tau = sn / (1.0 + c);
        h = t * a(p, q);
        z[p] -= h;
        z[q] += h;
        d[p] -= h;
        d[q] += h;
        a(p, q) = 0.0;
        auto rotate = [&](Matrix& m, std::size_t i, std::size_t j, std::size_t k, std::size_t l) {
          const double gg = m(i, j);
          const double hh = m(k, l);
          m(i, j) = gg - sn * (hh + gg * tau);
          m(k, l) = hh + sn * (gg - hh * tau);
        };
        for (std::size_t j = 0; j < p; ++j) rotate(a, j, p, j, q);
        for (std::size_t j = p + 1; j < q; ++j) rotate(a, p, j, j, q);
        for (std::size_t j = q + 1; j < n; ++j) rotate(a, p, j, q, j);
        for (std::size_t j = 0; j < n; ++j) rotate(v, j, p, j, q);
      }
    }
    for (std::size_t p = 0; p < n; ++p) {
      b[p] += z[p];
      d[p] = b[p];
      z[p] = 0.0;
    }
  }
  if (!converged) throw NumericFailure("spectral_decompose: Jacobi sweeps did not converge");

  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](std::size_t i, std::size_t j) { return d[i] > d[j]; });

  SpectralDecomposition out;
  out.eigenvalues.resize(n);
  out.eigenvectors = Matrix(n, n);
  for (std::size_t k = 0; k < n; ++k) {
    out.eigenvalues[k] = d[order[k]];
    // Sign convention: largest-magnitude component positive.
    std::size_t big = 0;
    for (std::size_t i = 1; i < n; ++i)
      if (std::abs(v(i, order[k])) > std::abs(v(big, order[k]))) big = i;
    const double sign = v(big, order[k]) < 0.0 ? -1.0 : 1.0;
    for (std::size_t i = 0; i < n; ++i) out.eigenvectors(i, k) = sign * v(i, order[k]);
  }
  return out;
}

bool is_negative_definite(const SymMatrix& s, double tol) {
  if (tol < 0.0) throw InvalidInput("is_negative_definite: negative tolerance");
  if (s.n() == 0) return false;
  return spectral_decompose(s).max_eigenvalue() < -tol;
}

bool is_positive_semidefinite(const SymMatrix& s, double tol) {
  if (s.n() == 0) return true;
  return spectral_decompose(s).min_eigenvalue() >= -tol;
}

// ------------------------------------------------------------ Cholesky

Matrix cholesky(const SymMatrix& s) {
  const std::size_t n = s.n();
  Matrix l(n, n);
  for (std::size_t j = 0; j < n; ++j) {
    double diag = s(j, j);
    for (std::size_t k = 0; k < j; ++k) diag -= l(j, k) * l(j, k);
    if (!(diag > 0.0) || !std::isfinite(diag)) {
      throw FactorizationError("cholesky: matrix is not positive definite");
    }
    const double ljj = std::sqrt(diag);
    l(j, j) = ljj;
    for (std::size_t i = j + 1; i < n; ++i) {
      double sum = s(i, j);
      for (std::size_t k = 0; k < j; ++k) sum -= l(i, k) * l(j, k);
      l(i, j) = sum / ljj;
    }
  }
  return l;
}

Vector solve_spd(const SymMatrix& s, std::span<const double> rhs) {
  if (rhs.size() != s.n()) throw InvalidInput("solve_spd: dimension mismatch");
  const Matrix l = cholesky(s);
  const std::size_t n = s.n();
  Vector y(rhs.begin(), rhs.end());
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t k = 0; k < i; ++k) y[i] -= l(i, k) * y[k];
    y[i] /= l(i, i);
  }
  for (std::size_t i = n; i-- > 0;) {
    for (std::size_t k = i + 1; k < n; ++k) y[i] -= l(k, i) * y[k];
    y[i] /= l(i, i);
  }
  // One step of iterative refinement keeps the residual at rounding level
  // for moderately conditioned systems.
  Vector r(rhs.begin(), rhs.end());
  const Vector sx = s * y;
  for (std::size_t i = 0; i < n; ++i) r[i] -= sx[i];
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t k = 0; k < i; ++k) r[i] -= l(i, k) * r[k];
    r[i] /= l(i, i);
  }
  for (std::size_t i = n; i-- > 0;) {
    for (std::size_t k = i + 1; k < n; ++k) r[i] -= l(k, i) * r[k];
    r[i] /= l(i, i);
  }
  for (std::size_t i = 0; i < n; ++i) y[i] += r[i];
  return y;
}

Matrix lower_triangular_inverse(const Matrix& l) {
  const std::size_t n = l.rows();
  Matrix inv(n, n);
  for (std::size_t j = 0; j < n; ++j) {
    if (l(j, j) == 0.0) throw NumericFailure("lower_triangular_inverse: singular");
    inv(j, j) = 1.0 / l(j, j);
    for (std::size_t i = j + 1; i < n; ++i) {
      double sum = 0.0;
      for (std::size_t k = j; k < i; ++k) sum -= l(i, k) * inv(k, j);
      inv(i, j) = sum / l(i, i);
    }
  }
  return inv;
}

double dot(std::span<const double> a, std::span<const double> b) {
  if (a.size() != b.size()) throw InvalidInput("dot: dimension mismatch");
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

double norm2(std::span<const double> a) { return std::sqrt(dot(a, a)); }

double norm_inf(std::span<const double> a) {
  double m = 0.0;
  for (double x : a) m = std::max(m, std::abs(x));
  return m;
}

}  // namespace bilsdp
