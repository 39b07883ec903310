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

// Functionals of the empirical state-control measure.

#ifndef MFGP_MEASURES_HPP_
#define MFGP_MEASURES_HPP_

#include <cstddef>
#include <functional>
#include <span>
#include <stdexcept>

#include "mfgp/joint_measure.hpp"

namespace mfgp {

// Signals a normalized statistic requested on a measure with zero mass.
class EmptyPopulationError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

// Aggregates a model may read from the population. All are un-normalized
// integrals against the (sub-probability) measure.
struct MeasureSummary {
  double mass = 0.0;
  double first_moment = 0.0;
  double theta = 0.0;

  void Add(const JointAtom& a) {
    mass += a.weight;
    first_moment += a.weight * a.x;
    theta += a.weight * a.alpha;
  }
  void Remove(const JointAtom& a) {
    mass -= a.weight;
    first_moment -= a.weight * a.x;
    theta -= a.weight * a.alpha;
  }
};

MeasureSummary Summarize(std::span<const JointAtom> atoms);

// Read-only population snapshot handed to model callbacks. `excluded`, when
// non-negative, names an atom that convolutions skip; the summary is expected
// to already exclude it.
struct MeasureView {
  MeasureSummary summary;
  std::span<const JointAtom> atoms;
  std::ptrdiff_t excluded = -1;
};

MeasureView ViewOf(const EmpiricalJointMeasure& nu);

// Mean control Theta(nu) = sum w_k alpha_k, not renormalized by the mass.
double Theta(const EmpiricalJointMeasure& nu);
double TotalMass(const EmpiricalJointMeasure& nu);
double FirstMoment(const EmpiricalJointMeasure& nu);
// FirstMoment / TotalMass. Throws EmptyPopulationError at zero mass.
double CenterOfMass(const EmpiricalJointMeasure& nu);

using ScalarKernel = std::function<double(double)>;

// sum_k w_k Q(x - x_k) over the state marginal.
double Convolve(const ScalarKernel& q, const EmpiricalJointMeasure& nu, double x);
double Convolve(const ScalarKernel& q, const MeasureView& view, double x);

using Lagrangian =
    std::function<double(double t, double x, double alpha, const MeasureView& mu)>;

// Integral of (L(.;nu1) - L(.;nu2)) against the signed measure nu1 - nu2.
// Non-negative for Lagrangians that are monotone in the measure argument.
double MonotonicityCheck(const Lagrangian& lagrangian,
                         const EmpiricalJointMeasure& nu1,
                         const EmpiricalJointMeasure& nu2, double t);

using BestResponseMap = std::function<double(double t, double x)>;

// max_k |alpha_k - best_response(t, x_k)|; 0 for an empty measure.
double FixedPointResidual(const EmpiricalJointMeasure& mu,
                          const BestResponseMap& best_response, double t);

}  // namespace mfgp

#endif  // MFGP_MEASURES_HPP_
