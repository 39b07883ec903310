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
#include <limits>
#include <vector>

#include "doctest.h"
#include "mfgp/controls.hpp"
#include "mfgp/rng.hpp"

namespace {

double Dot(const std::vector<double>& u, const std::vector<double>& v) {
  double s = 0.0;
  for (std::size_t i = 0; i < u.size(); ++i) s += u[i] * v[i];
  return s;
}

// Independent oracle: plain bisection on s + p.q + a e^{bs} |q|^2 = 0.
std::vector<double> BisectionOracle(const std::vector<double>& p, const std::vector<double>& q,
                                    double a, double b) {
  const double pq = Dot(p, q);
  const double qq = Dot(q, q);
  auto f = [&](double s) { return s + pq + a * std::exp(b * s) * qq; };
  double lo = -1.0, hi = 1.0;
  while (f(lo) > 0.0) lo *= 2.0;
  while (f(hi) < 0.0) hi *= 2.0;
  for (int i = 0; i < 200; ++i) {
    const double mid = 0.5 * (lo + hi);
    (f(mid) < 0.0 ? lo : hi) = mid;
  }
  const double s = 0.5 * (lo + hi);
  std::vector<double> alpha(p.size());
  for (std::size_t i = 0; i < p.size(); ++i) alpha[i] = -p[i] - a * std::exp(b * s) * q[i];
  return alpha;
}

}  // namespace

TEST_CASE("uniform control grid") {
  const auto g = mfgp::ControlGrid::Uniform(-0.2, 0.2, 11);
  CHECK(g.size() == 11);
  CHECK(g.min() == -0.2);
  CHECK(g.max() == 0.2);
  CHECK(g[5] == doctest::Approx(0.0).scale(1.0));
  CHECK(g[1] - g[0] == doctest::Approx(0.04));
  CHECK(g.IndexOf(0.2) == std::optional<std::size_t>(10));
  CHECK_FALSE(g.IndexOf(0.05).has_value());
  CHECK_THROWS(mfgp::ControlGrid::Uniform(-0.2, 0.2, 1));
  CHECK_THROWS(mfgp::ControlGrid::Uniform(0.2, -0.2, 3));
  const mfgp::ControlGrid custom({0.2, -0.2, 0.2});
  CHECK(custom.size() == 2);
  CHECK(custom.min() == -0.2);
}

TEST_CASE("discrete best response") {
  const std::vector<double> grid{-0.2, 0.0, 0.2};
  std::vector<mfgp::ControlCost> quad, aligned, flat;
  for (double a : grid) {
    quad.push_back({a, 0.5 * a * a});
    aligned.push_back({a, 0.5 * a * a + a});
    flat.push_back({a, 3.0});
  }
  CHECK(mfgp::BestResponseDiscrete(quad) == 0.0);
  CHECK(aligned[0].cost == doctest::Approx(-0.18));
  CHECK(aligned[2].cost == doctest::Approx(0.22));
  CHECK(mfgp::BestResponseDiscrete(aligned) == -0.2);
  CHECK(mfgp::BestResponseDiscrete(flat) == -0.2);
  CHECK_THROWS_AS(mfgp::BestResponseDiscrete({}), std::invalid_argument);
  const std::vector<double> bad{0.0, std::numeric_limits<double>::quiet_NaN()};
  CHECK_THROWS_AS(mfgp::ArgMinCost(bad), std::invalid_argument);
}

TEST_CASE("argmin is the exhaustive minimum and shift invariant") {
  mfgp::CounterStream s(21, mfgp::StreamPurpose::kTest, 0, 0);
  for (int i = 0; i < 200; ++i) {
    std::vector<double> c(1 + s.NextBelow(15));
    for (auto& v : c) v = std::floor(10.0 * s.NextUniform());
    const std::size_t k = mfgp::ArgMinCost(c);
    for (std::size_t j = 0; j < c.size(); ++j) {
      CHECK(c[k] <= c[j]);
      if (j < k) CHECK(c[j] > c[k]);
    }
    std::vector<double> shifted(c);
    for (auto& v : shifted) v += 7.0;
    CHECK(mfgp::ArgMinCost(shifted) == k);
  }
}

TEST_CASE("linear control") {
  CHECK(mfgp::LinearControl(0.0, 0.0, 0.3) == 0.0);
  CHECK(mfgp::LinearControl(0.4, 0.7, 0.0) == -0.4);
  CHECK(mfgp::LinearControl(1.0, 0.2, 0.5) == doctest::Approx(-1.1).epsilon(1e-15));
}

TEST_CASE("linear control is Lipschitz in (p, theta)") {
  mfgp::CounterStream s(22, mfgp::StreamPurpose::kTest, 0, 0);
  for (int i = 0; i < 200; ++i) {
    const double p1 = s.NextNormal(), p2 = s.NextNormal();
    const double t1 = s.NextNormal(), t2 = s.NextNormal();
    const double m1 = s.NextUniform();
    const double lhs =
        std::abs(mfgp::LinearControl(p1, t1, m1) - mfgp::LinearControl(p2, t2, m1));
    CHECK(lhs <= std::abs(p1 - p2) + m1 * std::abs(t1 - t2) + 1e-15);
  }
}

TEST_CASE("closed-loop linear control") {
  std::vector<mfgp::AdjointSample> samples;
  for (int k = 0; k < 100; ++k) samples.push_back({(k + 0.5) / 100.0, 1.0, 0.01});
  for (const auto& c : mfgp::LinearControlClosedLoop(samples, 1.0)) {
    CHECK(std::abs(c.control + 0.5) <= 1e-12);
  }
  for (const auto& c : mfgp::LinearControlClosedLoop(samples, 0.0)) CHECK(c.control == -1.0);
  for (auto& s : samples) s.weight = 0.0;
  for (const auto& c : mfgp::LinearControlClosedLoop(samples, 1.0)) CHECK(c.control == -1.0);
}

TEST_CASE("alignment equation degenerate cases") {
  const std::vector<double> p{0.3, -0.4};
  const std::vector<double> zero{0.0, 0.0};
  const std::vector<double> q{0.1, 0.2};
  CHECK(mfgp::SolveAlignmentEquation(p, zero, 0.5, 1.0) == std::vector<double>{-0.3, 0.4});
  const auto lin = mfgp::SolveAlignmentEquation(p, q, 0.5, 0.0);
  CHECK(lin[0] == doctest::Approx(-0.3 - 0.05));
  CHECK(lin[1] == doctest::Approx(0.4 - 0.1));
}

TEST_CASE("alignment equation matches a bisection oracle") {
  const std::vector<double> p{1.0, 0.0};
  const std::vector<double> q{0.1, 0.1};
  const auto got = mfgp::SolveAlignmentEquation(p, q, 0.5, 1.0);
  const auto want = BisectionOracle(p, q, 0.5, 1.0);
  CHECK(got[0] == doctest::Approx(want[0]).epsilon(1e-13));
  CHECK(got[1] == doctest::Approx(want[1]).epsilon(1e-13));
  CHECK(mfgp::AlignmentResidual(p, q, 0.5, 1.0, got) <= 1e-10);
}

TEST_CASE("alignment residual on random admissible inputs") {
  mfgp::CounterStream s(23, mfgp::StreamPurpose::kTest, 0, 0);
  for (int i = 0; i < 100; ++i) {
    std::vector<double> p(2), q(2);
    for (auto& v : p) v = 2.0 * s.NextUniform() - 1.0;
    for (auto& v : q) v = 2.0 * s.NextUniform() - 1.0;
    const double a = s.NextUniform();
    const double b = 2.0 * s.NextUniform();
    const auto alpha = mfgp::SolveAlignmentEquation(p, q, a, b);
    CHECK(mfgp::AlignmentResidual(p, q, a, b, alpha) <= 1e-10);
    const auto oracle = BisectionOracle(p, q, a, b);
    CHECK(std::abs(alpha[0] - oracle[0]) <= 1e-12);
    CHECK(std::abs(alpha[1] - oracle[1]) <= 1e-12);
  }
}

TEST_CASE("exponential closed form") {
  const std::vector<double> p{0.3, -0.1};
  const std::vector<double> zero{0.0, 0.0};
  const std::vector<double> q{0.2, 0.1};
  CHECK(mfgp::ExponentialControlClosedForm(p, zero, 0.5, 1.0) == std::vector<double>{-0.3, 0.1});
  CHECK(mfgp::ExponentialControlClosedForm(p, q, 0.0, 1.0) == std::vector<double>{-0.3, 0.1});
  mfgp::CounterStream s(24, mfgp::StreamPurpose::kTest, 0, 0);
  int published_flagged = 0;
  for (int i = 0; i < 100; ++i) {
    std::vector<double> pp(2), qq(2);
    for (auto& v : pp) v = 2.0 * s.NextUniform() - 1.0;
    for (auto& v : qq) v = 2.0 * s.NextUniform() - 1.0;
    const double m1 = s.NextUniform();
    const double m2 = 0.1 + 1.9 * s.NextUniform();
    const auto checked = mfgp::ExponentialControlChecked(pp, qq, m1, m2);
    CHECK_FALSE(checked.flagged);
    CHECK(checked.discrepancy <= 1e-8);
    const auto solver = mfgp::SolveAlignmentEquation(pp, qq, m1 * m2, m2);
    CHECK(checked.control == solver);
    const auto published = mfgp::ExponentialControlChecked(
        pp, qq, m1, m2, mfgp::ClosedFormVariant::kAsPublished);
    CHECK(published.control == solver);
    if (published.flagged) {
      ++published_flagged;
      CHECK(published.discrepancy > 1e-8);
    }
  }
  CHECK(published_flagged > 0);
}

TEST_CASE("parameter gates") {
  mfgp::ControlParams ok;
  ok.bound_m = 0.05;
  ok.epsilon = 0.5;
  const auto pass = mfgp::ValidateParameters(ok, 0.0, 0.1);
  CHECK(pass.pass);
  CHECK(pass.margin == doctest::Approx(1.0 - 6 * 1.25e-4 - 9 * 2.5e-3 - 0.15).epsilon(1e-14));
  CHECK(pass.margin == doctest::Approx(0.82675).epsilon(1e-14));
  REQUIRE(pass.lipschitz.has_value());
  CHECK(*pass.lipschitz < *pass.lipschitz_bound);

  mfgp::ControlParams big = ok;
  big.bound_m = 1.0;
  const auto fail = mfgp::ValidateParameters(big, 0.0, 0.1);
  CHECK_FALSE(fail.pass);
  CHECK(fail.margin == doctest::Approx(1.0 - 18.0));
  REQUIRE_FALSE(fail.violations.empty());
  CHECK(fail.violations.front().find("(a)") != std::string::npos);
  CHECK_THROWS_AS(mfgp::ValidateParameters(ok, -1.0, 0.1), std::invalid_argument);

  // sup |phi'| above 2 eps - Lip M^2 breaks gate (c).
  const auto steep = mfgp::ValidateParameters(ok, 0.0, 1.5);
  CHECK_FALSE(steep.pass);
}
