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
#include <random>

#include "bilsdp/error.hpp"
#include "bilsdp/lowrank.hpp"
#include "bilsdp/simulate.hpp"
#include "bilsdp/synthesis.hpp"
#include "test_support.hpp"

using namespace bilsdp;

namespace {

const double kRoot2m1 = std::sqrt(2.0) - 1.0;

FeedbackSegment segment_for(const Vector& m) {
  ControlSchedule s;
  s.segments.push_back({1.0, m});
  s.total_duration = 1.0;
  return feedback_law(s).segments.front();
}

Vector normalized(Vector v) {
  const double n = norm2(v);
  for (double& x : v) x /= n;
  return v;
}

}  // namespace

TEST_CASE("rank-one schedule keeps one direction") {
  const Vector m{0.4546, 0.8257, 0.3339};
  const SymMatrix M = SymMatrix::outer(normalized(m)) * 0.8589;
  for (int reps : {1, 3, 8}) {
    const ControlSchedule s = schedule_from_solution(M, reps);
    REQUIRE(s.segments.size() == static_cast<std::size_t>(reps));
    CHECK(std::abs(s.total_duration - 0.8589) <= 1e-9);
    for (const auto& seg : s.segments) {
      CHECK(std::abs(norm2(seg.direction) - 1.0) <= 1e-12);
      CHECK(std::abs(std::abs(dot(seg.direction, normalized(m))) - 1.0) <= 1e-9);
    }
  }
}

TEST_CASE("zero matrix gives an empty schedule") {
  const ControlSchedule s = schedule_from_solution(SymMatrix(3), 4);
  CHECK(s.empty());
  CHECK(s.total_duration == 0.0);
}

TEST_CASE("rank-two schedule reconstructs M") {
  std::mt19937_64 rng(12);
  for (int trial = 0; trial < 20; ++trial) {
    const SymMatrix M = testing::with_spectrum({1.3, 0.4, 0.0, 0.0}, rng);
    const ControlSchedule s = schedule_from_solution(M, 4);
    CHECK(s.segments.size() == 8);
    CHECK(testing::max_entry_diff(s.reconstruct(4), M) <= 1e-9);
    CHECK(std::abs(s.total_duration - M.trace()) <= 1e-9);
    for (const auto& seg : s.segments) CHECK(std::abs(norm2(seg.direction) - 1.0) <= 1e-12);
  }
  CHECK_THROWS_AS(schedule_from_solution(SymMatrix::identity(2), 0), InvalidInput);
}

TEST_CASE("choose_repetitions") {
  SUBCASE("rank one needs no repetition") {
    const SymMatrix M = SymMatrix::outer(normalized({1.0, kRoot2m1}));
    CHECK(choose_repetitions(M, ProblemSpec::chain(2, 1.0, {1, 0})).repetitions == 1);
  }
  SUBCASE("large initial populations need no repetition") {
    std::mt19937_64 rng(4);
    const SymMatrix M = testing::with_spectrum({0.02, 0.01, 0.0}, rng);
    const RepetitionChoice c = choose_repetitions(M, ProblemSpec::chain(3, 1.0, {10, 10, 10}));
    CHECK(c.repetitions == 1);
    CHECK(c.satisfied);
  }
  SUBCASE("a dip under one pass is removed by repeating") {
    // Search small rank-two instances on the three-state chain whose single
    // pass crosses below zero although the end point is nonnegative.
    const ProblemSpec chain = ProblemSpec::chain(3, 1.0, {0, 0, 0});
    const ConstraintSet set = build_constraints(chain);
    std::mt19937_64 rng(2);
    int found = 0;
    for (int trial = 0; trial < 400 && found < 5; ++trial) {
      const SymMatrix M = testing::with_spectrum({1.0, 0.6, 0.0}, rng);
      Vector p0(3);
      for (std::size_t i = 0; i < 3; ++i) p0[i] = std::max(0.0, -trace_inner(set.matrices[i], M)) + 1e-3;
      const ProblemSpec spec = ProblemSpec::make(chain.A, p0, 2);
      if (!simulate_p(schedule_from_solution(M, 1), spec.A, p0).negative_excursion()) continue;
      ++found;
      const RepetitionChoice c = choose_repetitions(M, spec);
      CHECK(c.repetitions >= 2);
      CHECK(c.satisfied);
      CHECK_FALSE(simulate_p(schedule_from_solution(M, c.repetitions), spec.A, p0).negative_excursion());
    }
    CHECK(found > 0);
  }
}

TEST_CASE("feedback controls") {
  SUBCASE("two-state optimal direction on its own ray") {
    const FeedbackSegment seg = segment_for(normalized({1.0, kRoot2m1}));
    const Vector u = feedback_controls(seg, {{1.0, kRoot2m1}});
    CHECK(u[0] == doctest::Approx(1.0));
    CHECK(u[1] == doctest::Approx(1.0));
  }
  SUBCASE("zero radius with a nonzero ratio is stationary") {
    const FeedbackSegment seg = segment_for(normalized({1.0, kRoot2m1}));
    const Vector u = feedback_controls(seg, {{1.0, 0.0}});
    CHECK(u == Vector{0.0, 0.0});
    CHECK(is_stationary(seg, {{1.0, 0.0}}));
  }
  SUBCASE("single-axis direction") {
    const FeedbackSegment seg = segment_for({1.0, 0.0, 0.0});
    CHECK(feedback_controls(seg, {{0.7, 0.2, 0.0}}) == Vector{1.0, 0.0, 0.0});
  }
  SUBCASE("u_i r_i is parallel to the direction and max |u_i| = 1") {
    std::mt19937_64 rng(6);
    std::normal_distribution<double> normal;
    std::uniform_real_distribution<double> pos(0.05, 2.0);
    for (int trial = 0; trial < 200; ++trial) {
      Vector m(4), r(4);
      for (auto& x : m) x = normal(rng);
      for (auto& x : r) x = pos(rng);
      m = normalized(m);
      const FeedbackSegment seg = segment_for(m);
      const Vector u = feedback_controls(seg, {r});
      double umax = 0.0;
      for (double x : u) umax = std::max(umax, std::abs(x));
      CHECK(umax == doctest::Approx(1.0));
      Vector ur(4);
      for (std::size_t i = 0; i < 4; ++i) ur[i] = u[i] * r[i];
      const double scale = norm2(ur);
      for (std::size_t i = 0; i < 4; ++i)
        for (std::size_t j = 0; j < 4; ++j) CHECK(std::abs(ur[i] * m[j] - ur[j] * m[i]) <= 1e-12 * scale);
    }
  }
}

TEST_CASE("feedback rates match finite differences") {
  const ProblemSpec spec = ProblemSpec::chain(3, 0.7, {1, 1, 0});
  const FeedbackSegment seg = segment_for(normalized({0.45, 0.83, 0.33}));
  RadialState r{{0.9, 0.6, 0.2}};
  const Vector u = feedback_controls(seg, r);
  const Vector rdot = radial_rates(spec.A, u, r);
  const Vector udot = feedback_rates(seg, r, rdot);
  const double h = 1e-7;
  RadialState rp = r, rm = r;
  for (std::size_t i = 0; i < 3; ++i) {
    rp.r[i] += h * rdot[i];
    rm.r[i] -= h * rdot[i];
  }
  const Vector up = feedback_controls(seg, rp), um = feedback_controls(seg, rm);
  for (std::size_t i = 0; i < 3; ++i) CHECK(std::abs((up[i] - um[i]) / (2 * h) - udot[i]) <= 1e-6);
}

TEST_CASE("epsilon kick") {
  const FeedbackLaw two = feedback_law(schedule_from_solution(SymMatrix::outer(normalized({1.0, kRoot2m1})), 1));
  CHECK(epsilon_kick({{1.0, 0.0}}, two, 1e-3).r == Vector{1.0, 1e-3});
  CHECK(epsilon_kick({{1.0, 0.5}}, two, 1e-3).r == Vector{1.0, 0.5});
  const FeedbackLaw three = feedback_law(schedule_from_solution(SymMatrix::outer(normalized({1.0, 0.7, 0.3})), 1));
  const double eps = 1e-2;
  CHECK(epsilon_kick({{1.0, eps, 0.0}}, three, eps).r == Vector{1.0, eps, eps});
  CHECK(default_kick({{0.5, 2.0, 0.0}}) == doctest::Approx(2e-3));
  CHECK_THROWS_AS(epsilon_kick({{1.0, 0.0}}, two, 0.0), InvalidInput);
}

TEST_CASE("physical controls") {
  const Matrix a = ProblemSpec::chain(2, 1.0, {1, 0}).A;
  SUBCASE("nothing to maintain") {
    const Vector v = physical_controls({0.0, 0.0}, {{1.0, 0.5}}, {0.0, 0.0}, a);
    CHECK(v == Vector{0.0, 0.0});
  }
  SUBCASE("zero radius with moving phase is singular") {
    CHECK_THROWS_AS(physical_controls({0.2, 0.0}, {{1.0, 0.0}}, {0.0, 0.3}, a), SingularControl);
    CHECK_NOTHROW(physical_controls({0.2, 0.0}, {{1.0, 0.0}}, {0.0, 0.0}, a));
  }
  SUBCASE("pure rotation of the first state") {
    // x1 = cos(wt), y1 = sin(wt) with no coupling: u1 = sin(wt) and v1 = w.
    const Matrix zero(2, 2);
    const double w = 0.8, t = 0.3;
    const Vector u{std::sin(w * t), 0.0};
    const Vector udot{w * std::cos(w * t), 0.0};
    const Vector v = physical_controls(u, {{1.0, 1.0}}, udot, zero);
    CHECK(v[0] == doctest::Approx(w));
  }
  SUBCASE("the bilinear state built from u has the prescribed phases") {
    const BilinearState s = bilinear_state_from_law({0.6, -1.0}, {{2.0, 0.5}});
    CHECK(s.y[0] == doctest::Approx(1.2));
    CHECK(s.x[0] == doctest::Approx(1.6));
    CHECK(s.y[1] == doctest::Approx(-0.5));
    CHECK(s.x[1] == doctest::Approx(0.0));
  }
}
