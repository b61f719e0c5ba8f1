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

#include "bilsdp/oracles.hpp"

#include <cmath>

#include "bilsdp/error.hpp"

namespace bilsdp {

namespace {

void require_positive_xi(double xi) {
  if (!(xi > 0.0) || !std::isfinite(xi)) throw InvalidInput("oracle: xi must be a positive finite number");
}

}  // namespace

double transfer_ratio_2x2(double xi, double x) { return (x - xi * x * x) / (x + xi); }

double transfer_ratio_3chain(double xi, double x, double y) { return (x * y - xi * y * y) / (x + xi); }

ClosedForm2x2 analytic_2x2(double xi) {
  require_positive_xi(xi);
  ClosedForm2x2 c;
  c.xi = xi;
  // 1 / (sqrt(1 + xi^2) + xi) avoids cancellation for large xi.
  c.x0 = 1.0 / (std::hypot(1.0, xi) + xi);
  c.efficiency = c.x0;
  c.p_gain = c.x0 * c.x0;
  const double len = std::hypot(1.0, c.x0);
  c.direction = {1.0 / len, c.x0 / len};
  return c;
}

ClosedForm3Chain analytic_3chain(double xi) {
  require_positive_xi(xi);
  ClosedForm3Chain c;
  c.xi = xi;
  c.x0 = 2.0 / (std::sqrt(xi * xi + 2.0) + xi);
  c.y0 = 1.0 - xi * c.x0;
  c.f_max = std::pow(c.x0, 4) / 4.0;
  c.efficiency = c.x0 * c.x0 / 2.0;
  c.x_lo = xi / (1.0 + xi * xi);
  c.x_hi = 1.0 / xi;
  return c;
}

bool analytic_reachable_2x2(double xi, double r1, double r2) {
  const double x0 = analytic_2x2(xi).x0;
  if (r1 < 0.0 || r2 < 0.0) return false;
  return r2 * r2 + x0 * x0 * r1 * r1 <= x0 * x0 + 1e-12;
}

}  // namespace bilsdp
