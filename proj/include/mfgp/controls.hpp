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

// Optimal-control building blocks: discrete best response over a control
// grid, the closed-form controls for linear and exponential alignment costs,
// and the admissibility gates for the alignment-cost parameters.

#ifndef MFGP_CONTROLS_HPP_
#define MFGP_CONTROLS_HPP_

#include <cstddef>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace mfgp {

// Finite, sorted set of admissible controls.
class ControlGrid {
 public:
  // lo + i (hi - lo) / (n - 1), i = 0..n-1, endpoints exact. Requires n >= 2.
  static ControlGrid Uniform(double lo, double hi, int n);

  // Arbitrary non-empty set; sorted and deduplicated on construction.
  explicit ControlGrid(std::vector<double> points);

  std::span<const double> points() const { return points_; }
  std::size_t size() const { return points_.size(); }
  double operator[](std::size_t i) const { return points_[i]; }
  double min() const { return points_.front(); }
  double max() const { return points_.back(); }
  // Index of an exact grid value, or nullopt.
  std::optional<std::size_t> IndexOf(double control) const;

 private:
  std::vector<double> points_;
};

struct ControlCost {
  double control;
  double cost;
};

// Index of the minimal cost; ties go to the smallest index. Throws
// std::invalid_argument on an empty list or a non-finite cost.
std::size_t ArgMinCost(std::span<const double> costs);

// Control with minimal cost, ties broken by list position.
double BestResponseDiscrete(std::span<const ControlCost> costs);

// -p - M1 theta, for the linear alignment cost phi(z) = M1 z.
double LinearControl(double p, double theta, double m1);
std::vector<double> LinearControl(std::span<const double> p,
                                  std::span<const double> theta, double m1);

struct AdjointSample {
  double x;
  double p;
  double weight;
};

struct ControlAt {
  double x;
  double control;
};

// Self-consistent linear-cost control against the population it induces:
// alpha*(x) = -p(x) + M1 / (1 + M1 m) * sum_k w_k p_k, m = sum_k w_k.
std::vector<ControlAt> LinearControlClosedLoop(std::span<const AdjointSample> samples,
                                               double m1);

// Raised when the scalar reduction of the alignment equation has no bracket.
class BracketingError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Solves p + alpha + a exp(b alpha.q) q = 0 through the scalar unknown
// s = alpha.q, which satisfies s + p.q + a e^{bs} |q|^2 = 0.
std::vector<double> SolveAlignmentEquation(std::span<const double> p,
                                           std::span<const double> q, double a,
                                           double b);

// Componentwise max of |p + alpha + a exp(b alpha.q) q|.
double AlignmentResidual(std::span<const double> p, std::span<const double> q,
                         double a, double b, std::span<const double> alpha);

enum class ClosedFormVariant {
  // alpha = -p - W(ab|q|^2 e^{-b p.q}) / (b |q|^2) q. Solves the equation.
  kLambert,
  // alpha = -p - a exp(b W(ab|q|^2 (p.q) e^{-b p.q})) q, the commonly quoted
  // expression. Kept for comparison; it does not solve the equation in general.
  kAsPublished,
};

// Closed-form solution of the alignment equation for the exponential cost
// phi(z) = M1 exp(M2 z), i.e. a = M1 M2, b = M2. Lambert domain errors
// propagate as std::domain_error.
std::vector<double> ExponentialControlClosedForm(
    std::span<const double> p, std::span<const double> q, double m1, double m2,
    ClosedFormVariant variant = ClosedFormVariant::kLambert);

struct CrossCheckedControl {
  std::vector<double> control;      // solver value, always authoritative
  std::vector<double> closed_form;  // empty if the closed form threw
  double discrepancy = 0.0;         // max componentwise |closed - solver|
  bool flagged = false;             // discrepancy > tolerance or closed form failed
  std::string note;
};

// Exponential-cost control with the closed form validated against the
// root-finder. The closed form is never returned in place of the solver.
CrossCheckedControl ExponentialControlChecked(
    std::span<const double> p, std::span<const double> q, double m1, double m2,
    ClosedFormVariant variant = ClosedFormVariant::kLambert,
    double tolerance = 1e-8);

// Parameters of the alignment cost. M bounds both the control set
// (A inside the ball of radius M) and the diameter of domain x controls.
struct ControlParams {
  double m1 = 0.0;
  double m2 = 0.0;
  double epsilon = 0.5;
  double bound_m = 1.0;
};

struct GateReport {
  bool pass = false;
  // 2 eps - 6 M^3 - 9 M^2 - 3 M.
  double margin = 0.0;
  std::vector<std::string> violations;
  // Lipschitz constant 1 / (2 eps - Lip(phi') M^2) of the control map and the
  // bound 1 / ((3 + 3 delta)(1 + 2 delta) |xi|) it must stay below, with
  // delta = |xi| = M. Set only when every gate passes.
  std::optional<double> lipschitz;
  std::optional<double> lipschitz_bound;
};

// Checks the uniqueness / Lipschitz gates for a convex alignment cost phi
// with the given Lip(phi') and sup |phi'|. Throws std::invalid_argument on
// negative inputs.
GateReport ValidateParameters(const ControlParams& params, double lip_phi_prime,
                              double sup_phi_prime);

}  // namespace mfgp

#endif  // MFGP_CONTROLS_HPP_
