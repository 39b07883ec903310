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

#include "mfgp/controls.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>
#include <string>

#include "mfgp/lambert_w.hpp"

namespace mfgp {
namespace {

double Dot(std::span<const double> u, std::span<const double> v) {
  double s = 0.0;
  for (std::size_t i = 0; i < u.size(); ++i) s += u[i] * v[i];
  return s;
}

void CheckSameSize(std::span<const double> p, std::span<const double> q) {
  if (p.size() != q.size() || p.empty()) {
    throw std::invalid_argument("control vectors must be non-empty and of equal size");
  }
}

std::vector<double> MinusPMinusCq(std::span<const double> p,
                                  std::span<const double> q, double c) {
  std::vector<double> out(p.size());
  for (std::size_t i = 0; i < p.size(); ++i) out[i] = -p[i] - c * q[i];
  return out;
}

}  // namespace

ControlGrid ControlGrid::Uniform(double lo, double hi, int n) {
  if (n < 2) throw std::invalid_argument("ControlGrid: need at least 2 points");
  if (!(lo < hi)) throw std::invalid_argument("ControlGrid: need lo < hi");
  std::vector<double> pts(static_cast<std::size_t>(n));
  const double step = (hi - lo) / (n - 1);
  for (int i = 0; i < n; ++i) pts[i] = lo + i * step;
  pts.back() = hi;
  return ControlGrid(std::move(pts));
}

ControlGrid::ControlGrid(std::vector<double> points) : points_(std::move(points)) {
  if (points_.empty()) throw std::invalid_argument("ControlGrid: empty");
  for (double v : points_) {
    if (!std::isfinite(v)) throw std::invalid_argument("ControlGrid: non-finite point");
  }
  std::sort(points_.begin(), points_.end());
  points_.erase(std::unique(points_.begin(), points_.end()), points_.end());
}

std::optional<std::size_t> ControlGrid::IndexOf(double control) const {
  auto it = std::lower_bound(points_.begin(), points_.end(), control);
  if (it == points_.end() || *it != control) return std::nullopt;
  return static_cast<std::size_t>(it - points_.begin());
}

std::size_t ArgMinCost(std::span<const double> costs) {
  if (costs.empty()) throw std::invalid_argument("best response over an empty control set");
  std::size_t best = 0;
  for (std::size_t i = 0; i < costs.size(); ++i) {
    if (!std::isfinite(costs[i])) {
      throw std::invalid_argument("non-finite cost at control index " + std::to_string(i));
    }
    if (costs[i] < costs[best]) best = i;
  }
  return best;
}

double BestResponseDiscrete(std::span<const ControlCost> costs) {
  std::vector<double> values(costs.size());
  for (std::size_t i = 0; i < costs.size(); ++i) values[i] = costs[i].cost;
  return costs[ArgMinCost(values)].control;
}

double LinearControl(double p, double theta, double m1) { return -p - m1 * theta; }

std::vector<double> LinearControl(std::span<const double> p,
                                  std::span<const double> theta, double m1) {
  CheckSameSize(p, theta);
  return MinusPMinusCq(p, theta, m1);
}

std::vector<ControlAt> LinearControlClosedLoop(std::span<const AdjointSample> samples,
                                               double m1) {
  double mass = 0.0;
  double mean_adjoint = 0.0;
  for (const AdjointSample& s : samples) {
    mass += s.weight;
    mean_adjoint += s.weight * s.p;
  }
  const double shift = m1 / (1.0 + m1 * mass) * mean_adjoint;
  std::vector<ControlAt> out;
  out.reserve(samples.size());
  for (const AdjointSample& s : samples) out.push_back({s.x, -s.p + shift});
  return out;
}

double AlignmentResidual(std::span<const double> p, std::span<const double> q,
                         double a, double b, std::span<const double> alpha) {
  const double e = a * std::exp(b * Dot(alpha, q));
  double worst = 0.0;
  for (std::size_t i = 0; i < p.size(); ++i) {
    worst = std::max(worst, std::abs(p[i] + alpha[i] + e * q[i]));
  }
  return worst;
}

std::vector<double> SolveAlignmentEquation(std::span<const double> p,
                                           std::span<const double> q, double a,
                                           double b) {
  CheckSameSize(p, q);
  const double q2 = Dot(q, q);
  if (q2 == 0.0 || a == 0.0) return MinusPMinusCq(p, q, 0.0);
  if (b == 0.0) return MinusPMinusCq(p, q, a);

  const double pq = Dot(p, q);
  // F is strictly increasing whenever ab >= 0.
  auto F = [&](double s) { return s + pq + a * std::exp(b * s) * q2; };
  auto dF = [&](double s) { return 1.0 + a * b * q2 * std::exp(b * s); };

  // F(-pq) = a |q|^2 e^{-b pq} has the sign of a; grow the other end.
  double lo = -pq;
  double hi = -pq;
  double width = 1.0 + std::abs(a) * q2;
  bool bracketed = false;
  for (int i = 0; i < 200 && !bracketed; ++i) {
    if (a > 0.0) {
      lo = -pq - width;
    } else {
      hi = -pq + width;
    }
    const double flo = F(lo);
    const double fhi = F(hi);
    bracketed = std::isfinite(flo) && std::isfinite(fhi) && flo <= 0.0 && fhi >= 0.0;
    width *= 2.0;
  }
  if (!bracketed) {
    std::ostringstream msg;
    msg << "alignment equation: no sign change found (a=" << a << ", b=" << b
        << "); parameters outside the admissible regime";
    throw BracketingError(msg.str());
  }

  // Safeguarded Newton: fall back to bisection whenever the step leaves the
  // bracket.
  double s = 0.5 * (lo + hi);
  for (int i = 0; i < 500; ++i) {
    const double f = F(s);
    const double scale = std::max(1.0, std::abs(s) + std::abs(pq));
    if (std::abs(f) <= 1e-13 * scale) break;
    if (f > 0.0) {
      hi = s;
    } else {
      lo = s;
    }
    const double d = dF(s);
    double next = s - f / d;
    if (!(next > lo && next < hi) || !std::isfinite(next)) next = 0.5 * (lo + hi);
    if (next == s || hi - lo <= 4.0 * std::numeric_limits<double>::epsilon() * scale) {
      s = next;
      break;
    }
    s = next;
  }
  return MinusPMinusCq(p, q, a * std::exp(b * s));
}

std::vector<double> ExponentialControlClosedForm(std::span<const double> p,
                                                 std::span<const double> q,
                                                 double m1, double m2,
                                                 ClosedFormVariant variant) {
  CheckSameSize(p, q);
  const double a = m1 * m2;
  const double b = m2;
  const double q2 = Dot(q, q);
  if (q2 == 0.0 || a == 0.0) return MinusPMinusCq(p, q, 0.0);
  if (b == 0.0) return MinusPMinusCq(p, q, a);
  const double pq = Dot(p, q);
  if (variant == ClosedFormVariant::kLambert) {
    const double w = LambertW0(a * b * q2 * std::exp(-b * pq));
    return MinusPMinusCq(p, q, w / (b * q2));
  }
  const double w = LambertW0(a * b * q2 * pq * std::exp(-b * pq));
  return MinusPMinusCq(p, q, a * std::exp(b * w));
}

CrossCheckedControl ExponentialControlChecked(std::span<const double> p,
                                              std::span<const double> q,
                                              double m1, double m2,
                                              ClosedFormVariant variant,
                                              double tolerance) {
  CrossCheckedControl out;
  out.control = SolveAlignmentEquation(p, q, m1 * m2, m2);
  try {
    out.closed_form = ExponentialControlClosedForm(p, q, m1, m2, variant);
  } catch (const std::domain_error& e) {
    out.flagged = true;
    out.discrepancy = std::numeric_limits<double>::infinity();
    out.note = std::string("closed form undefined: ") + e.what();
    return out;
  }
  for (std::size_t i = 0; i < p.size(); ++i) {
    out.discrepancy =
        std::max(out.discrepancy, std::abs(out.closed_form[i] - out.control[i]));
  }
  if (!(out.discrepancy <= tolerance)) {
    out.flagged = true;
    std::ostringstream msg;
    msg << "closed form deviates from the solver by " << out.discrepancy
        << "; solver value used";
    out.note = msg.str();
  }
  return out;
}

GateReport ValidateParameters(const ControlParams& params, double lip_phi_prime,
                              double sup_phi_prime) {
  if (lip_phi_prime < 0.0 || sup_phi_prime < 0.0) {
    throw std::invalid_argument("ValidateParameters: Lip(phi') and sup|phi'| must be >= 0");
  }
  if (!(params.epsilon > 0.0) || !(params.bound_m > 0.0)) {
    throw std::invalid_argument("ValidateParameters: epsilon and M must be positive");
  }
  const double m = params.bound_m;
  const double two_eps = 2.0 * params.epsilon;
  GateReport report;
  report.margin = two_eps - 6.0 * m * m * m - 9.0 * m * m - 3.0 * m;

  if (!(report.margin > 0.0 && report.margin <= two_eps && two_eps <= 1.0)) {
    std::ostringstream msg;
    msg << "gate (a): need 0 < 2eps - 6M^3 - 9M^2 - 3M <= 2eps <= 1, got margin "
        << report.margin << " and 2eps = " << two_eps;
    report.violations.push_back(msg.str());
  }
  if (!(lip_phi_prime < report.margin / (m * m))) {
    std::ostringstream msg;
    msg << "gate (b): need Lip(phi') < margin / M^2 = " << report.margin / (m * m)
        << ", got " << lip_phi_prime;
    report.violations.push_back(msg.str());
  }
  if (!(sup_phi_prime <= two_eps - lip_phi_prime * m * m)) {
    std::ostringstream msg;
    msg << "gate (c): need sup|phi'| <= 2eps - Lip(phi') M^2 = "
        << two_eps - lip_phi_prime * m * m << ", got " << sup_phi_prime;
    report.violations.push_back(msg.str());
  }
  report.pass = report.violations.empty();
  if (report.pass) {
    const double delta = m;
    const double xi = m;
    report.lipschitz = 1.0 / (two_eps - lip_phi_prime * m * m);
    report.lipschitz_bound = 1.0 / ((3.0 + 3.0 * delta) * (1.0 + 2.0 * delta) * xi);
    if (!(*report.lipschitz < *report.lipschitz_bound)) {
      report.pass = false;
      std::ostringstream msg;
      msg << "Lipschitz bound: L = " << *report.lipschitz
          << " is not below " << *report.lipschitz_bound;
      report.violations.push_back(msg.str());
    }
  }
  return report;
}

}  // namespace mfgp
