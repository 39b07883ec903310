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

// Scalar reference kernels. The vector variants must match these exactly.

#include <algorithm>
#include <cmath>
#include <cstddef>

#include "mfgp/simd.hpp"

namespace mfgp::simd {
namespace {

void DensityScalar(const DensityArgs& args) {
  const std::size_t n_atoms = args.atom_x.size();
  for (std::size_t q = 0; q < args.queries.size(); ++q) {
    const double at = args.queries[q];
    double acc = 0.0;
    for (std::size_t k = 0; k < n_atoms; ++k) {
      const double u = std::abs(at - args.atom_x[k]) * args.inv_bandwidth;
      acc = acc + args.atom_w[k] * ShapeProfile(args.shape, u);
    }
    args.out[q] = acc * args.norm;
  }
}

void CostScanScalar(const CostScanParams& p, std::span<const double> controls,
                    std::span<double> costs) {
  for (std::size_t i = 0; i < controls.size(); ++i) {
    const double a = controls[i];
    double xp = p.x + (p.drift_base + a) * p.move_dt;
    xp = std::min(std::max(xp, p.lo), p.hi);
    const double d = std::abs(p.congestion_center - xp);
    double c = p.congestion_weight / (d + p.softening);
    c = c + p.state_slope * xp;
    c = c + p.constant;
    c = c + a * (p.linear + p.quadratic * a);
    costs[i] = c * p.scale;
  }
}

}  // namespace

namespace detail {
const KernelTable& ScalarTable() {
  static const KernelTable table{Isa::kScalar, &DensityScalar,
                                 &CostScanScalar};
  return table;
}
}  // namespace detail

}  // namespace mfgp::simd
