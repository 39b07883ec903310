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

#include "mfgp/joint_measure.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace mfgp {

double Interval::MaxAbs() const { return std::max(std::abs(lo), std::abs(hi)); }

EmpiricalJointMeasure::EmpiricalJointMeasure(Interval domain, Interval controls)
    : domain_(domain), controls_(controls) {
  if (!(domain.lo < domain.hi) || !(controls.lo <= controls.hi)) {
    throw std::invalid_argument("EmpiricalJointMeasure: empty domain or control set");
  }
}

EmpiricalJointMeasure::EmpiricalJointMeasure(Interval domain, Interval controls,
                                             std::vector<JointAtom> atoms)
    : EmpiricalJointMeasure(domain, controls) {
  atoms_.reserve(atoms.size());
  for (const JointAtom& a : atoms) Add(a);
}

void EmpiricalJointMeasure::CheckAtom(const JointAtom& atom) const {
  if (!(atom.weight >= 0.0) || !std::isfinite(atom.weight)) {
    throw std::invalid_argument("EmpiricalJointMeasure: negative or non-finite weight");
  }
  if (!domain_.Contains(atom.x)) {
    throw std::invalid_argument("EmpiricalJointMeasure: position " +
                                std::to_string(atom.x) + " outside the domain");
  }
  if (!controls_.Contains(atom.alpha)) {
    throw std::invalid_argument("EmpiricalJointMeasure: control " +
                                std::to_string(atom.alpha) +
                                " outside the control set");
  }
  if (mass_ + atom.weight > 1.0 + kMassTolerance) {
    throw std::invalid_argument("EmpiricalJointMeasure: total mass exceeds one");
  }
}

void EmpiricalJointMeasure::Add(const JointAtom& atom) {
  CheckAtom(atom);
  atoms_.push_back(atom);
  mass_ += atom.weight;
}

void EmpiricalJointMeasure::RemoveAt(std::size_t index) {
  if (index >= atoms_.size()) {
    throw std::out_of_range("EmpiricalJointMeasure::RemoveAt");
  }
  mass_ -= atoms_[index].weight;
  atoms_.erase(atoms_.begin() + static_cast<std::ptrdiff_t>(index));
}

}  // namespace mfgp
