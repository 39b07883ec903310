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

// AArch64 NEON variants, 2 doubles per lane group. Only built on aarch64.

#include <arm_neon.h>

#include <algorithm>
#include <cmath>
#include <cstddef>

#include "mfgp/simd.hpp"

namespace mfgp::simd {
namespace {

inline float64x2_t Profile(KernelShape shape, float64x2_t u) {
  const float64x2_t one = vdupq_n_f64(1.0);
  const float64x2_t zero = vdupq_n_f64(0.0);
  if (shape == KernelShape::kCubicBSpline) {
    const float64x2_t two = vdupq_n_f64(2.0);
    const float64x2_t s = vmulq_f64(two, u);
    const float64x2_t s2 = vmulq_f64(s, s);
    const float64x2_t inner =
        vaddq_f64(vsubq_f64(one, vmulq_f64(vdupq_n_f64(1.5), s2)),
                  vmulq_f64(vdupq_n_f64(0.75), vmulq_f64(s2, s)));
    const float64x2_t t = vsubq_f64(two, s);
    const float64x2_t outer =
        vmulq_f64(vdupq_n_f64(0.25), vmulq_f64(vmulq_f64(t, t), t));
    const uint64x2_t lt1 = vcltq_f64(s, one);
    const uint64x2_t lt2 = vcltq_f64(s, two);
    return vbslq_f64(lt1, inner, vbslq_f64(lt2, outer, zero));
  }
  const float64x2_t t = vsubq_f64(one, vmulq_f64(u, u));
  return vbslq_f64(vcltq_f64(u, one), vmulq_f64(t, t), zero);
}

void DensityNeon(const DensityArgs& args) {
  const std::size_t n_queries = args.queries.size();
  const std::size_t n_atoms = args.atom_x.size();
  const float64x2_t inv_h = vdupq_n_f64(args.inv_bandwidth);
  std::size_t q = 0;
  for (; q + 2 <= n_queries; q += 2) {
    const float64x2_t at = vld1q_f64(args.queries.data() + q);
    float64x2_t acc = vdupq_n_f64(0.0);
    for (std::size_t k = 0; k < n_atoms; ++k) {
      const float64x2_t u =
          vmulq_f64(vabsq_f64(vsubq_f64(at, vdupq_n_f64(args.atom_x[k]))), inv_h);
      acc = vaddq_f64(acc, vmulq_f64(vdupq_n_f64(args.atom_w[k]),
                                     Profile(args.shape, u)));
    }
    vst1q_f64(args.out.data() + q, vmulq_f64(acc, vdupq_n_f64(args.norm)));
  }
  for (; q < n_queries; ++q) {
    double acc = 0.0;
    for (std::size_t k = 0; k < n_atoms; ++k) {
      const double u =
          std::abs(args.queries[q] - args.atom_x[k]) * args.inv_bandwidth;
      acc = acc + args.atom_w[k] * ShapeProfile(args.shape, u);
    }
    args.out[q] = acc * args.norm;
  }
}

void CostScanNeon(const CostScanParams& p, std::span<const double> controls,
                  std::span<double> costs) {
  const std::size_t n = controls.size();
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2) {
    const float64x2_t a = vld1q_f64(controls.data() + i);
    float64x2_t xp = vaddq_f64(
        vdupq_n_f64(p.x),
        vmulq_f64(vaddq_f64(vdupq_n_f64(p.drift_base), a), vdupq_n_f64(p.move_dt)));
    xp = vminq_f64(vmaxq_f64(xp, vdupq_n_f64(p.lo)), vdupq_n_f64(p.hi));
    const float64x2_t d = vabsq_f64(vsubq_f64(vdupq_n_f64(p.congestion_center), xp));
    float64x2_t c = vdivq_f64(vdupq_n_f64(p.congestion_weight),
                              vaddq_f64(d, vdupq_n_f64(p.softening)));
    c = vaddq_f64(c, vmulq_f64(vdupq_n_f64(p.state_slope), xp));
    c = vaddq_f64(c, vdupq_n_f64(p.constant));
    c = vaddq_f64(c, vmulq_f64(a, vaddq_f64(vdupq_n_f64(p.linear),
                                            vmulq_f64(vdupq_n_f64(p.quadratic), a))));
    vst1q_f64(costs.data() + i, vmulq_f64(c, vdupq_n_f64(p.scale)));
  }
  for (; i < n; ++i) {
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
const KernelTable* NeonTable() {
  static const KernelTable table{Isa::kNeon, &DensityNeon, &CostScanNeon};
  return &table;
}
}  // namespace detail

}  // namespace mfgp::simd
