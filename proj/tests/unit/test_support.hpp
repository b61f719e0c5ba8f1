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

// Helpers shared by the unit tests. Random matrices here are built without
// the library's own decompositions so they can serve as oracles.

#pragma once

#include <cmath>
#include <random>
#include <vector>

#include "bilsdp/linalg.hpp"

namespace bilsdp::testing {

inline Matrix random_matrix(std::size_t r, std::size_t c, std::mt19937_64& rng, double scale = 1.0) {
  std::normal_distribution<double> normal(0.0, scale);
  Matrix m(r, c);
  for (std::size_t i = 0; i < r; ++i)
    for (std::size_t j = 0; j < c; ++j) m(i, j) = normal(rng);
  return m;
}

inline SymMatrix random_symmetric(std::size_t n, std::mt19937_64& rng, double scale = 1.0) {
  return SymMatrix::symmetric_part(random_matrix(n, n, rng, scale));
}

// Orthonormal columns by modified Gram-Schmidt on a Gaussian matrix.
inline Matrix random_orthogonal(std::size_t n, std::mt19937_64& rng) {
  Matrix q = random_matrix(n, n, rng);
  for (std::size_t j = 0; j < n; ++j) {
    for (std::size_t k = 0; k < j; ++k) {
      double d = 0.0;
      for (std::size_t i = 0; i < n; ++i) d += q(i, j) * q(i, k);
      for (std::size_t i = 0; i < n; ++i) q(i, j) -= d * q(i, k);
    }
    double nn = 0.0;
    for (std::size_t i = 0; i < n; ++i) nn += q(i, j) * q(i, j);
    nn = std::sqrt(nn);
    for (std::size_t i = 0; i < n; ++i) q(i, j) /= nn;
  }
  return q;
}

// Q diag(spectrum) Q^T.
inline SymMatrix with_spectrum(const std::vector<double>& spectrum, std::mt19937_64& rng) {
  const std::size_t n = spectrum.size();
  const Matrix q = random_orthogonal(n, rng);
  SymMatrix out(n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i; j < n; ++j) {
      double s = 0.0;
      for (std::size_t k = 0; k < n; ++k) s += q(i, k) * spectrum[k] * q(j, k);
      out.set(i, j, s);
    }
  return out;
}

inline double max_entry_diff(const SymMatrix& a, const SymMatrix& b) {
  double d = 0.0;
  for (std::size_t i = 0; i < a.n(); ++i)
    for (std::size_t j = 0; j < a.n(); ++j) d = std::max(d, std::abs(a(i, j) - b(i, j)));
  return d;
}

}  // namespace bilsdp::testing
