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

#include "mfgp/weak_star.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace mfgp {

void WeakStarMetricConfig::Validate() const {
  if (!(a > 1.0)) throw std::invalid_argument("weak-* metric: a must exceed 1");
  if (max_terms < 1) throw std::invalid_argument("weak-* metric: need at least one term");
}

double WeakStarMetricConfig::Diameter() const {
  const double x = state_box.MaxAbs();
  const double u = control_box.MaxAbs();
  return std::sqrt(x * x + u * u);
}

std::vector<std::pair<int, int>> MonomialExponents(int max_terms) {
  std::vector<std::pair<int, int>> out;
  out.reserve(static_cast<std::size_t>(std::max(max_terms, 0)));
  for (int degree = 0; static_cast<int>(out.size()) < max_terms; ++degree) {
    for (int j = 0; j <= degree && static_cast<int>(out.size()) < max_terms; ++j) {
      out.emplace_back(degree - j, j);
    }
  }
  return out;
}

std::vector<double> MonomialMoments(std::span<const double> x,
                                    std::span<const double> alpha,
                                    std::span<const double> weight,
                                    int max_terms) {
  if (x.size() != alpha.size() || x.size() != weight.size()) {
    throw std::invalid_argument("MonomialMoments: size mismatch");
  }
  const auto exps = MonomialExponents(max_terms);
  int max_degree = 0;
  for (const auto& [i, j] : exps) max_degree = std::max(max_degree, i + j);

  std::vector<double> moments(exps.size(), 0.0);
  std::vector<double> xp(static_cast<std::size_t>(max_degree) + 1);
  std::vector<double> ap(static_cast<std::size_t>(max_degree) + 1);
  for (std::size_t k = 0; k < x.size(); ++k) {
    xp[0] = 1.0;
    ap[0] = 1.0;
    for (int p = 1; p <= max_degree; ++p) {
      xp[p] = xp[p - 1] * x[k];
      ap[p] = ap[p - 1] * alpha[k];
    }
    for (std::size_t m = 0; m < exps.size(); ++m) {
      moments[m] += weight[k] * (xp[exps[m].first] * ap[exps[m].second]);
    }
  }
  return moments;
}

std::vector<double> MonomialMoments(const EmpiricalJointMeasure& nu, int max_terms) {
  std::vector<double> x, a, w;
  x.reserve(nu.size());
  a.reserve(nu.size());
  w.reserve(nu.size());
  for (const JointAtom& atom : nu.atoms()) {
    x.push_back(atom.x);
    a.push_back(atom.alpha);
    w.push_back(atom.weight);
  }
  return MonomialMoments(x, a, w, max_terms);
}

double WeakStarDistanceFromMoments(std::span<const double> moments1,
                                   std::span<const double> moments2, double a) {
  if (moments1.size() != moments2.size()) {
    throw std::invalid_argument("WeakStarDistanceFromMoments: size mismatch");
  }
  double sum = 0.0;
  double weight = 1.0;
  for (std::size_t k = 0; k < moments1.size(); ++k) {
    weight /= a;
    const double diff = std::abs(moments1[k] - moments2[k]);
    sum += weight * diff / (1.0 + diff);
  }
  return sum;
}

double WeakStarDistance(const EmpiricalJointMeasure& nu1,
                        const EmpiricalJointMeasure& nu2,
                        const WeakStarMetricConfig& cfg) {
  cfg.Validate();
  const auto m1 = MonomialMoments(nu1, cfg.max_terms);
  const auto m2 = MonomialMoments(nu2, cfg.max_terms);
  return WeakStarDistanceFromMoments(m1, m2, cfg.a);
}

}  // namespace mfgp
