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

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>

#include "bilsdp/io.hpp"
#include "bilsdp/reachable.hpp"

using namespace bilsdp;

namespace {

const double kGain = 3.0 - 2.0 * std::sqrt(2.0);

}  // namespace

TEST_CASE("two-state slices") {
  const ProblemSpec spec = ProblemSpec::chain(2, 1.0, {1, 0});
  SUBCASE("full depletion") {
    const ReachSlice s = reach_slice(spec, {0.0});
    REQUIRE(s.feasible());
    CHECK(std::abs(*s.p_target_max - kGain) <= 1e-6);
    CHECK(s.solution_rank <= 1);
  }
  SUBCASE("staying put is reachable") {
    const ReachSlice s = reach_slice(spec, {1.0});
    REQUIRE(s.feasible());
    CHECK(*s.p_target_max >= 0.0);
    CHECK(*s.p_target_max <= 1e-6);
  }
  SUBCASE("half depletion") {
    const ReachSlice s = reach_slice(spec, {0.5});
    REQUIRE(s.feasible());
    CHECK(std::abs(*s.p_target_max - 0.5 * kGain) <= 1e-6);
  }
}

TEST_CASE("two-state sweep matches the closed form") {
  const ProblemSpec spec = ProblemSpec::chain(2, 1.0, {1, 0});
  const ReachSet set = reach_set(spec, default_axes(spec));
  REQUIRE(set.slices.size() == 21);
  CHECK(set.infeasible_count() == 0);
  for (const ReachSlice& s : set.slices) {
    REQUIRE(s.feasible());
    CHECK(std::abs(*s.p_target_max - kGain * (1.0 - s.base[0])) <= 1e-5);
  }
  CHECK(set.down_rate == doctest::Approx(-2.0));
  CHECK(set.segments_downward_closed);
}

TEST_CASE("empty grid gives no slices") {
  const ProblemSpec spec = ProblemSpec::chain(2, 1.0, {1, 0});
  const ReachSet set = reach_set(spec, {{}});
  CHECK(set.slices.empty());
  CHECK(set.infeasible_count() == 0);
}

TEST_CASE("three-state grid respects the transfer bound") {
  const ProblemSpec spec = ProblemSpec::chain(3, 1.0, {1, 1, 0});
  std::vector<double> axis;
  for (int k = 0; k <= 5; ++k) axis.push_back(k / 5.0);
  const ReachSet set = reach_set(spec, {axis, axis}, 2);
  REQUIRE(set.slices.size() == 36);
  CHECK(set.infeasible_count() == 0);
  for (const ReachSlice& s : set.slices) {
    REQUIRE(s.feasible());
    CHECK(*s.p_target_max <= (1.0 - s.base[0]) + (1.0 - s.base[1]) + 1e-7);
  }
  // Moving the base toward p0 never loses feasibility or raises the maximum.
  for (std::size_t i = 0; i < 6; ++i)
    for (std::size_t j = 0; j + 1 < 6; ++j) {
      const ReachSlice& lo = set.slices[i * 6 + j];
      const ReachSlice& hi = set.slices[i * 6 + j + 1];
      CHECK(*hi.p_target_max <= *lo.p_target_max + 1e-7);
    }
}

TEST_CASE("worker count does not change the sweep") {
  const ProblemSpec spec = ProblemSpec::chain(3, 0.5, {1, 0.5, 0});
  const auto axes = default_axes(spec, 5);
  const std::string one = reach_csv(reach_set(spec, axes, 1), spec);
  const std::string four = reach_csv(reach_set(spec, axes, 4), spec);
  CHECK(one == four);
  CHECK(one.substr(0, one.find('\n')) == "p_1,p_2,p_3_max,feasible,rank");
}

TEST_CASE("relabeling the non-target states permutes the slices") {
  const ProblemSpec spec = ProblemSpec::chain(3, 1.0, {1, 0.6, 0});
  // Swap states 1 and 2.
  const std::size_t perm[3] = {1, 0, 2};
  Matrix a(3, 3);
  for (std::size_t i = 0; i < 3; ++i)
    for (std::size_t j = 0; j < 3; ++j) a(perm[i], perm[j]) = spec.A(i, j);
  const ProblemSpec swapped = ProblemSpec::make(a, {0.6, 1.0, 0.0}, 2);
  for (const auto& base : std::vector<Vector>{{0.0, 0.0}, {0.5, 0.2}, {1.0, 0.3}, {0.2, 0.6}}) {
    const ReachSlice s = reach_slice(spec, base);
    const ReachSlice t = reach_slice(swapped, {base[1], base[0]});
    REQUIRE(s.feasible() == t.feasible());
    if (s.feasible()) CHECK(std::abs(*s.p_target_max - *t.p_target_max) <= 1e-7);
  }
}
