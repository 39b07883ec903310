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

#ifndef MFGP_JOINT_MEASURE_HPP_
#define MFGP_JOINT_MEASURE_HPP_

#include <cstddef>
#include <span>
#include <vector>

namespace mfgp {

// Closed interval [lo, hi].
struct Interval {
  double lo = 0.0;
  double hi = 1.0;

  bool Contains(double v) const { return v >= lo && v <= hi; }
  double Width() const { return hi - lo; }
  double MaxAbs() const;
  bool operator==(const Interval&) const = default;
};

// One atom of a state-control measure: a point mass `weight` at (x, alpha).
struct JointAtom {
  double x = 0.0;
  double alpha = 0.0;
  double weight = 0.0;
};

// Sub-probability measure on (closed domain) x (control set), stored as
// weighted atoms. Total mass never exceeds one; absorption only removes mass.
class EmpiricalJointMeasure {
 public:
  static constexpr double kMassTolerance = 1e-12;

  EmpiricalJointMeasure(Interval domain, Interval controls);
  EmpiricalJointMeasure(Interval domain, Interval controls,
                        std::vector<JointAtom> atoms);

  // Throws std::invalid_argument if the atom violates the support or mass
  // invariants.
  void Add(const JointAtom& atom);
  void RemoveAt(std::size_t index);

  std::span<const JointAtom> atoms() const { return atoms_; }
  std::size_t size() const { return atoms_.size(); }
  bool empty() const { return atoms_.empty(); }
  const Interval& domain() const { return domain_; }
  const Interval& controls() const { return controls_; }

 private:
  void CheckAtom(const JointAtom& atom) const;

  Interval domain_;
  Interval controls_;
  std::vector<JointAtom> atoms_;
  double mass_ = 0.0;
};

}  // namespace mfgp

#endif  // MFGP_JOINT_MEASURE_HPP_
