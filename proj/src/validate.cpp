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

#include "mfgp/validate.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "mfgp/controls.hpp"
#include "mfgp/rng.hpp"

namespace mfgp {

std::pair<EmpiricalJointMeasure, EmpiricalJointMeasure> RandomMeasurePair(
    const Interval& domain, const Interval& controls, PairKind kind,
    std::uint64_t seed, std::uint32_t index) {
  CounterStream s(seed, StreamPurpose::kTest, index, 0u);
  auto random_atoms = [&](std::size_t count) {
    std::vector<JointAtom> atoms(count);
    std::vector<double> raw(count);
    double sum = s.NextUniform();  // leftover mass keeps the total below 1
    for (std::size_t i = 0; i < count; ++i) {
      atoms[i].x = domain.lo + s.NextUniform() * domain.Width();
      atoms[i].alpha = controls.lo + s.NextUniform() * controls.Width();
      raw[i] = s.NextUniform();
      sum += raw[i];
    }
    for (std::size_t i = 0; i < count; ++i) atoms[i].weight = raw[i] / sum;
    return atoms;
  };
  auto atoms1 = random_atoms(1 + s.NextBelow(12));
  std::vector<JointAtom> atoms2;
  if (kind == PairKind::kNested) {
    atoms2 = atoms1;
    for (auto& a : atoms2) {
      const double u = s.NextUniform();
      a.weight *= u < 0.25 ? 0.0 : u;
    }
  } else {
    atoms2 = random_atoms(1 + s.NextBelow(12));
  }
  return {EmpiricalJointMeasure(domain, controls, std::move(atoms1)),
          EmpiricalJointMeasure(domain, controls, std::move(atoms2))};
}

MonotonicitySummary MonotonicitySuite(const Lagrangian& lagrangian, const Interval& domain,
                                      const Interval& controls, PairKind kind, int pairs,
                                      std::uint64_t seed, double tolerance) {
  MonotonicitySummary out;
  out.min_value = std::numeric_limits<double>::infinity();
  for (int i = 0; i < pairs; ++i) {
    const auto [nu1, nu2] =
        RandomMeasurePair(domain, controls, kind, seed, static_cast<std::uint32_t>(i));
    const double v = MonotonicityCheck(lagrangian, nu1, nu2, 0.0);
    out.min_value = std::min(out.min_value, v);
    if (!(v >= tolerance)) ++out.below_tolerance;
    ++out.pairs;
  }
  out.pass = out.below_tolerance == 0;
  return out;
}

ValidationOutcome ValidateRunConfig(const RunConfig& config) {
  ValidationOutcome out;
  config.Validate();
  const ModelSpec model = BuildModel(config);
  const Interval domain{config.domain_lo, config.domain_hi};
  const Interval controls{config.control_lo, config.control_hi};
  auto line = [&](bool ok, const std::string& text) {
    out.lines.push_back(std::string(ok ? "PASS " : "FAIL ") + text);
    if (!ok) out.pass = false;
  };
  auto number = [](double v) { return FormatShortest(v); };

  if (config.model == ModelKind::kRefinancing) {
    const ControlParams params = BuildControlParams(config);
    // phi(z) = M1 z: phi' = M1 is constant.
    const GateReport gates = ValidateParameters(params, 0.0, config.m1);
    std::string detail = "parameter gates (M=" + number(params.bound_m) +
                         ", eps=" + number(params.epsilon) + ", M1=" + number(params.m1) +
                         ", margin=" + number(gates.margin) + ")";
    for (const auto& v : gates.violations) detail += "; " + v;
    line(gates.pass, detail);
    const double half_diameter = std::max(std::abs(config.domain_lo), std::abs(config.domain_hi));
    if (half_diameter > params.bound_m) {
      out.lines.push_back("NOTE state domain extends beyond M; the gates bound controls only");
    }
    const auto mono = MonotonicitySuite(model.lagrangian, domain, controls,
                                        PairKind::kGeneral, 200, config.seed);
    line(mono.pass, "monotonicity, 200 general pairs (min " + number(mono.min_value) + ")");
  } else {
    line(config.beta >= 0.0, "alignment weight beta >= 0");
    const auto nested = MonotonicitySuite(model.lagrangian, domain, controls,
                                          PairKind::kNested, 200, config.seed);
    out.lines.push_back("INFO monotonicity of the first-moment congestion cost, 200 nested "
                        "pairs: " +
                        std::to_string(nested.pairs - nested.below_tolerance) + "/" +
                        std::to_string(nested.pairs) + " non-negative (min " +
                        number(nested.min_value) + ")");
  }
  return out;
}

}  // namespace mfgp
