// Copyright 2026 The mfgp Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <cmath>
#include <vector>

#include "doctest.h"
#include "mfgp/measures.hpp"
#include "mfgp/rng.hpp"

namespace {

using mfgp::EmpiricalJointMeasure;
using mfgp::Interval;
using mfgp::JointAtom;

const Interval kDomain{0.0, 1.0};
const Interval kControls{-0.2, 0.2};

EmpiricalJointMeasure Measure(std::vector<JointAtom> atoms) {
  return EmpiricalJointMeasure(kDomain, kControls, std::move(atoms));
}

EmpiricalJointMeasure RandomMeasure(mfgp::CounterStream& s) {
  std::vector<JointAtom> atoms(1 + s.NextBelow(8));
  for (auto& a : atoms) {
    a.x = s.NextUniform();
    a.alpha = -0.2 + 0.4 * s.NextUniform();
    a.weight = s.NextUniform() / 8.0;
  }
  return Measure(atoms);
}

// Alignment Lagrangian M1 alpha Theta(nu) + eps alpha^2, no congestion.
mfgp::Lagrangian Alignment(double m1) {
  return [m1](double, double, double a, const mfgp::MeasureView& mu) {
    return m1 * a * mu.summary.theta + 0.5 * a * a;
  };
}

}  // namespace

TEST_CASE("empirical measure rejects invalid atoms") {
  CHECK_THROWS_AS(Measure({{1.5, 0.0, 0.1}}), std::invalid_argument);
  CHECK_THROWS_AS(Measure({{0.5, 0.3, 0.1}}), std::invalid_argument);
  CHECK_THROWS_AS(Measure({{0.5, 0.0, -0.1}}), std::invalid_argument);
  CHECK_THROWS_AS(Measure({{0.5, 0.0, 0.6}, {0.6, 0.0, 0.6}}), std::invalid_argument);
  CHECK_NOTHROW(Measure({{0.0, -0.2, 0.5}, {1.0, 0.2, 0.5}}));
}

TEST_CASE("theta is the un-normalized mean control") {
  CHECK(mfgp::Theta(Measure({{0.5, 0.1, 0.5}, {0.7, -0.1, 0.5}})) == 0.0);
  CHECK(mfgp::Theta(Measure({{0.3, 0.2, 1.0}})) == 0.2);
  CHECK(mfgp::Theta(Measure({{0.3, 0.2, 0.25}, {0.6, 0.1, 0.25}})) ==
        doctest::Approx(0.25 * 0.2 + 0.25 * 0.1).epsilon(1e-15));
  CHECK(mfgp::Theta(Measure({})) == 0.0);
}

TEST_CASE("theta is bounded by the control bound times the mass") {
  mfgp::CounterStream s(11, mfgp::StreamPurpose::kTest, 0, 0);
  for (int i = 0; i < 100; ++i) {
    const auto nu = RandomMeasure(s);
    CHECK(std::abs(mfgp::Theta(nu)) <= 0.2 * mfgp::TotalMass(nu) + 1e-15);
  }
}

TEST_CASE("mass, first moment and center of mass") {
  auto nu = Measure({{0.5, 0.0, 0.5}, {1.0, 0.0, 0.5}});
  CHECK(mfgp::TotalMass(nu) == 1.0);
  CHECK(mfgp::FirstMoment(nu) == 0.75);
  CHECK(mfgp::CenterOfMass(nu) == 0.75);
  nu.RemoveAt(1);
  CHECK(mfgp::TotalMass(nu) == 0.5);
  const auto single = Measure({{0.3, 0.0, 0.2}});
  CHECK(mfgp::FirstMoment(single) == doctest::Approx(0.06).epsilon(1e-15));
  CHECK(mfgp::CenterOfMass(single) == doctest::Approx(0.3).epsilon(1e-15));
  CHECK_THROWS_AS(mfgp::CenterOfMass(Measure({})), mfgp::EmptyPopulationError);
}

TEST_CASE("convolution against the state marginal") {
  const auto nu = Measure({{0.2, 0.0, 0.3}, {0.6, 0.1, 0.4}});
  CHECK(mfgp::Convolve([](double) { return 1.0; }, nu, 0.5) ==
        doctest::Approx(mfgp::TotalMass(nu)).epsilon(1e-15));
  CHECK(mfgp::Convolve([](double) { return 0.0; }, nu, 0.5) == 0.0);
  const auto point = Measure({{0.5, 0.0, 1.0}});
  CHECK(mfgp::Convolve([](double z) { return z * z; }, point, 0.7) ==
        doctest::Approx(0.04).epsilon(1e-14));
}

TEST_CASE("convolution through a view skips the excluded atom") {
  const auto nu = Measure({{0.2, 0.0, 0.3}, {0.6, 0.1, 0.4}});
  mfgp::MeasureView view = mfgp::ViewOf(nu);
  view.excluded = 0;
  CHECK(mfgp::Convolve([](double) { return 1.0; }, view, 0.5) == doctest::Approx(0.4));
}

TEST_CASE("monotonicity check of the alignment cost") {
  mfgp::CounterStream s(12, mfgp::StreamPurpose::kTest, 0, 0);
  const double m1 = 0.1;
  for (int i = 0; i < 200; ++i) {
    const auto a = RandomMeasure(s);
    const auto b = RandomMeasure(s);
    const double got = mfgp::MonotonicityCheck(Alignment(m1), a, b, 0.0);
    const double dtheta = mfgp::Theta(a) - mfgp::Theta(b);
    CHECK(got == doctest::Approx(m1 * dtheta * dtheta).epsilon(1e-9).scale(1e-15));
    CHECK(got >= -1e-12);
    CHECK(got == doctest::Approx(mfgp::MonotonicityCheck(Alignment(m1), b, a, 0.0)));
    CHECK(mfgp::MonotonicityCheck(Alignment(m1), a, a, 0.0) == 0.0);
  }
}

TEST_CASE("monotonicity check is zero for measure-independent Lagrangians") {
  mfgp::CounterStream s(13, mfgp::StreamPurpose::kTest, 0, 0);
  const mfgp::Lagrangian plain = [](double, double x, double a, const mfgp::MeasureView&) {
    return x * x + a;
  };
  const auto a = RandomMeasure(s);
  const auto b = RandomMeasure(s);
  CHECK(mfgp::MonotonicityCheck(plain, a, b, 0.0) == 0.0);
}

TEST_CASE("fixed-point residual") {
  const auto nu = Measure({{0.4, 0.1, 1.0}});
  CHECK(mfgp::FixedPointResidual(nu, [](double, double) { return -0.1; }, 0.0) ==
        doctest::Approx(0.2).epsilon(1e-15));
  CHECK(mfgp::FixedPointResidual(nu, [](double, double) { return 0.1; }, 0.0) == 0.0);
  CHECK(mfgp::FixedPointResidual(Measure({}), [](double, double) { return 1.0; }, 0.0) == 0.0);
}
