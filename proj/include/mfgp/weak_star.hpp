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

// Truncated moment metric for weak-* convergence of sub-probability measures
// on (state, control) space:
//
//   d_a(nu1, nu2) = sum_{k=1}^{K} a^{-k} |I_k| / (1 + |I_k|),
//   I_k = integral of f_k d(nu1 - nu2),
//
// where f_k runs over the raw monomials x^i alpha^j ordered by total degree
// (f_1 = 1), and within one degree by decreasing power of x. The value depends
// on this choice of unnormalized basis.

#ifndef MFGP_WEAK_STAR_HPP_
#define MFGP_WEAK_STAR_HPP_

#include <span>
#include <utility>
#include <vector>

#include "mfgp/joint_measure.hpp"

namespace mfgp {

struct WeakStarMetricConfig {
  double a = 2.0;
  int max_terms = 20;
  Interval state_box{0.0, 1.0};
  Interval control_box{-1.0, 1.0};

  // Throws std::invalid_argument unless a > 1 and max_terms >= 1.
  void Validate() const;
  // sup |(x, alpha)| over the box.
  double Diameter() const;
};

// (power of x, power of alpha) for f_1 .. f_K.
std::vector<std::pair<int, int>> MonomialExponents(int max_terms);

// Moments m_k = sum_j w_j x_j^{i_k} alpha_j^{j_k}, k = 1..K.
std::vector<double> MonomialMoments(std::span<const double> x,
                                    std::span<const double> alpha,
                                    std::span<const double> weight,
                                    int max_terms);
std::vector<double> MonomialMoments(const EmpiricalJointMeasure& nu, int max_terms);

double WeakStarDistanceFromMoments(std::span<const double> moments1,
                                   std::span<const double> moments2, double a);

double WeakStarDistance(const EmpiricalJointMeasure& nu1,
                        const EmpiricalJointMeasure& nu2,
                        const WeakStarMetricConfig& cfg);

}  // namespace mfgp

#endif  // MFGP_WEAK_STAR_HPP_
