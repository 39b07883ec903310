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

// Randomized monotonicity suites and the pre-run parameter checks.

#ifndef MFGP_VALIDATE_HPP_
#define MFGP_VALIDATE_HPP_

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "mfgp/config.hpp"
#include "mfgp/joint_measure.hpp"
#include "mfgp/measures.hpp"

namespace mfgp {

enum class PairKind {
  // Two independent random sub-probability measures.
  kGeneral,
  // nu2 <= nu1: same atoms with weights scaled by factors in [0, 1].
  kNested,
};

// Random pair with 1..12 atoms, states uniform in the domain interior,
// controls uniform in the control set and total mass <= 1.
std::pair<EmpiricalJointMeasure, EmpiricalJointMeasure> RandomMeasurePair(
    const Interval& domain, const Interval& controls, PairKind kind,
    std::uint64_t seed, std::uint32_t index);

struct MonotonicitySummary {
  int pairs = 0;
  int below_tolerance = 0;
  double min_value = 0.0;
  bool pass = true;
};

MonotonicitySummary MonotonicitySuite(const Lagrangian& lagrangian, const Interval& domain,
                                      const Interval& controls, PairKind kind, int pairs,
                                      std::uint64_t seed, double tolerance = -1e-12);

struct ValidationOutcome {
  bool pass = true;
  std::vector<std::string> lines;
};

// Parameter gates (refinancing) and monotonicity spot checks for a config.
ValidationOutcome ValidateRunConfig(const RunConfig& config);

}  // namespace mfgp

#endif  // MFGP_VALIDATE_HPP_
