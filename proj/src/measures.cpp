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

#include "mfgp/measures.hpp"

#include <algorithm>
#include <cmath>

namespace mfgp {

MeasureSummary Summarize(std::span<const JointAtom> atoms) {
  MeasureSummary s;
  for (const JointAtom& a : atoms) s.Add(a);
  return s;
}

MeasureView ViewOf(const EmpiricalJointMeasure& nu) {
  return MeasureView{Summarize(nu.atoms()), nu.atoms(), -1};
}

double Theta(const EmpiricalJointMeasure& nu) { return Summarize(nu.atoms()).theta; }

double TotalMass(const EmpiricalJointMeasure& nu) {
  return Summarize(nu.atoms()).mass;
}

double FirstMoment(const EmpiricalJointMeasure& nu) {
  return Summarize(nu.atoms()).first_moment;
}

double CenterOfMass(const EmpiricalJointMeasure& nu) {
  const MeasureSummary s = Summarize(nu.atoms());
  if (!(s.mass > 0.0)) {
    throw EmptyPopulationError("center of mass of an empty population");
  }
  return s.first_moment / s.mass;
}

double Convolve(const ScalarKernel& q, const MeasureView& view, double x) {
  double acc = 0.0;
  for (std::size_t k = 0; k < view.atoms.size(); ++k) {
    if (static_cast<std::ptrdiff_t>(k) == view.excluded) continue;
    acc += view.atoms[k].weight * q(x - view.atoms[k].x);
  }
  return acc;
}

double Convolve(const ScalarKernel& q, const EmpiricalJointMeasure& nu, double x) {
  return Convolve(q, ViewOf(nu), x);
}

double MonotonicityCheck(const Lagrangian& lagrangian,
                         const EmpiricalJointMeasure& nu1,
                         const EmpiricalJointMeasure& nu2, double t) {
  const MeasureView v1 = ViewOf(nu1);
  const MeasureView v2 = ViewOf(nu2);
  auto integrand = [&](const JointAtom& a) {
    return lagrangian(t, a.x, a.alpha, v1) - lagrangian(t, a.x, a.alpha, v2);
  };
  double plus = 0.0;
  for (const JointAtom& a : nu1.atoms()) plus += a.weight * integrand(a);
  double minus = 0.0;
  for (const JointAtom& a : nu2.atoms()) minus += a.weight * integrand(a);
  return plus - minus;
}

double FixedPointResidual(const EmpiricalJointMeasure& mu,
                          const BestResponseMap& best_response, double t) {
  double worst = 0.0;
  for (const JointAtom& a : mu.atoms()) {
    worst = std::max(worst, std::abs(a.alpha - best_response(t, a.x)));
  }
  return worst;
}

}  // namespace mfgp
