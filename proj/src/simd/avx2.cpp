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

// AVX2 variants, 4 doubles per lane group. This file is compiled with -mavx2
// and is only entered after a runtime CPU check.

#include <immintrin.h>

#include <algorithm>
#include <cmath>
#include <cstddef>

#include "mfgp/simd.hpp"

namespace mfgp::simd {
namespace {

inline __m256d Abs(__m256d v) {
  return _mm256_andnot_pd(_mm256_set1_pd(-0.0), v);
}

// Select-by-mask: mask ? a : b.
inline __m256d Select(__m256d mask, __m256d a, __m256d b) {
  return _mm256_blendv_pd(b, a, mask);
}

inline __m256d Profile(KernelShape shape, __m256d u) {
  const __m256d one = _mm256_set1_pd(1.0);
  const __m256d zero = _mm256_setzero_pd();
  if (shape == KernelShape::kCubicBSpline) {
    const __m256d two = _mm256_set1_pd(2.0);
    const __m256d s = _mm256_mul_pd(two, u);
    const __m256d s2 = _mm256_mul_pd(s, s);
    const __m256d inner =
        _mm256_add_pd(_mm256_sub_pd(one, _mm256_mul_pd(_mm256_set1_pd(1.5), s2)),
                      _mm256_mul_pd(_mm256_set1_pd(0.75), _mm256_mul_pd(s2, s)));
    const __m256d t = _mm256_sub_pd(two, s);
    const __m256d outer = _mm256_mul_pd(
        _mm256_set1_pd(0.25), _mm256_mul_pd(_mm256_mul_pd(t, t), t));
    const __m256d lt1 = _mm256_cmp_pd(s, one, _CMP_LT_OQ);
    const __m256d lt2 = _mm256_cmp_pd(s, two, _CMP_LT_OQ);
    return Select(lt1, inner, Select(lt2, outer, zero));
  }
  const __m256d t = _mm256_sub_pd(one, _mm256_mul_pd(u, u));
  const __m256d lt1 = _mm256_cmp_pd(u, one, _CMP_LT_OQ);
  return Select(lt1, _mm256_mul_pd(t, t), zero);
}

void DensityAvx2(const DensityArgs& args) {
  const std::size_t n_queries = args.queries.size();
  const std::size_t n_atoms = args.atom_x.size();
  const __m256d inv_h = _mm256_set1_pd(args.inv_bandwidth);
  const __m256d norm = _mm256_set1_pd(args.norm);
  std::size_t q = 0;
  for (; q + 4 <= n_queries; q += 4) {
    const __m256d at = _mm256_loadu_pd(args.queries.data() + q);
    __m256d acc = _mm256_setzero_pd();
    for (std::size_t k = 0; k < n_atoms; ++k) {
      const __m256d xk = _mm256_set1_pd(args.atom_x[k]);
      const __m256d u = _mm256_mul_pd(Abs(_mm256_sub_pd(at, xk)), inv_h);
      const __m256d v = Profile(args.shape, u);
      acc = _mm256_add_pd(acc, _mm256_mul_pd(_mm256_set1_pd(args.atom_w[k]), v));
    }
    _mm256_storeu_pd(args.out.data() + q, _mm256_mul_pd(acc, norm));
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

void CostScanAvx2(const CostScanParams& p, std::span<const double> controls,
                  std::span<double> costs) {
  const std::size_t n = controls.size();
  const __m256d x = _mm256_set1_pd(p.x);
  const __m256d drift = _mm256_set1_pd(p.drift_base);
  const __m256d move_dt = _mm256_set1_pd(p.move_dt);
  const __m256d lo = _mm256_set1_pd(p.lo);
  const __m256d hi = _mm256_set1_pd(p.hi);
  const __m256d cw = _mm256_set1_pd(p.congestion_weight);
  const __m256d cc = _mm256_set1_pd(p.congestion_center);
  const __m256d soft = _mm256_set1_pd(p.softening);
  const __m256d slope = _mm256_set1_pd(p.state_slope);
  const __m256d constant = _mm256_set1_pd(p.constant);
  const __m256d lin = _mm256_set1_pd(p.linear);
  const __m256d quad = _mm256_set1_pd(p.quadratic);
  const __m256d scale = _mm256_set1_pd(p.scale);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    const __m256d a = _mm256_loadu_pd(controls.data() + i);
    __m256d xp = _mm256_add_pd(x, _mm256_mul_pd(_mm256_add_pd(drift, a), move_dt));
    xp = _mm256_min_pd(_mm256_max_pd(xp, lo), hi);
    const __m256d d = Abs(_mm256_sub_pd(cc, xp));
    __m256d c = _mm256_div_pd(cw, _mm256_add_pd(d, soft));
    c = _mm256_add_pd(c, _mm256_mul_pd(slope, xp));
    c = _mm256_add_pd(c, constant);
    c = _mm256_add_pd(c, _mm256_mul_pd(a, _mm256_add_pd(lin, _mm256_mul_pd(quad, a))));
    _mm256_storeu_pd(costs.data() + i, _mm256_mul_pd(c, scale));
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
const KernelTable* Avx2Table() {
  static const KernelTable table{Isa::kAvx2, &DensityAvx2, &CostScanAvx2};
  return &table;
}
}  // namespace detail

}  // namespace mfgp::simd
