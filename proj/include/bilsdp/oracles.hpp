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

// Closed-form references for the two- and three-state chains.

#pragma once

#include <array>

namespace bilsdp {

struct ClosedForm2x2 {
  double xi = 0.0;
  double x0 = 0.0;          // sqrt(1 + xi^2) - xi, the optimal ratio m_2 / m_1
  double efficiency = 0.0;  // r_2(inf) from r(0) = (1, 0)
  double p_gain = 0.0;      // x0^2
  std::array<double, 2> direction{};  // (1, x0) / |(1, x0)|
};

struct ClosedForm3Chain {
  double xi = 0.0;
  double x0 = 0.0;  // sqrt(xi^2 + 2) - xi
  double y0 = 0.0;  // 1 - xi * x0
  double f_max = 0.0;
  double efficiency = 0.0;  // x0^2 / 2
  double x_lo = 0.0;        // xi / (1 + xi^2)
  double x_hi = 0.0;        // 1 / xi
};

/// f(x) = (x - xi x^2) / (x + xi).
double transfer_ratio_2x2(double xi, double x);
/// g(x, y) = (x y - xi y^2) / (x + xi).
double transfer_ratio_3chain(double xi, double x, double y);

/// Throws InvalidInput for xi <= 0.
ClosedForm2x2 analytic_2x2(double xi);
ClosedForm3Chain analytic_3chain(double xi);

/// Membership of (r1, r2) in the closure of the set reachable from (1, 0).
bool analytic_reachable_2x2(double xi, double r1, double r2);

}  // namespace bilsdp
