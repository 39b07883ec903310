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

// Data-parallel inner loops with a scalar reference and vector variants
// selected at runtime.
//
// Every kernel vectorizes across independent outputs (query points, grid
// controls) and performs the same IEEE operations in the same order as the
// scalar reference, so all variants produce bit-identical results. The
// project is compiled with -ffp-contract=off to keep it that way.

#ifndef MFGP_SIMD_HPP_
#define MFGP_SIMD_HPP_

#include <span>
#include <string_view>

namespace mfgp::simd {

enum class Isa { kScalar, kAvx2, kNeon };

std::string_view IsaName(Isa isa);
bool IsaSupported(Isa isa);

// Best supported ISA unless overridden by SetActiveIsa() or the MFGP_SIMD
// environment variable ("scalar", "avx2", "neon").
Isa ActiveIsa();
void SetActiveIsa(Isa isa);

enum class KernelShape { kCubicBSpline, kQuartic };

// Radial profile of a shape function on the unit ball, before normalization.
// Shared by the scalar paths so they agree with the vector kernels bit for
// bit.
inline double ShapeProfile(KernelShape shape, double u) {
  if (shape == KernelShape::kCubicBSpline) {
    const double s = 2.0 * u;
    if (s < 1.0) {
      const double s2 = s * s;
      return (1.0 - 1.5 * s2) + 0.75 * (s2 * s);
    }
    if (s < 2.0) {
      const double t = 2.0 - s;
      return 0.25 * ((t * t) * t);
    }
    return 0.0;
  }
  if (u < 1.0) {
    const double t = 1.0 - u * u;
    return t * t;
  }
  return 0.0;
}

struct DensityArgs {
  std::span<const double> queries;
  std::span<const double> atom_x;
  std::span<const double> atom_w;
  double inv_bandwidth = 1.0;
  // Multiplies the accumulated profile sum: c_d / bandwidth.
  double norm = 1.0;
  KernelShape shape = KernelShape::kCubicBSpline;
  std::span<double> out;
};

// One-step running cost over a list of candidate controls a_i:
//
//   x_i  = clamp(x + (drift_base + a_i) * move_dt, lo, hi)
//   c_i  = scale * ( congestion_weight / (|congestion_center - x_i| + softening)
//                    + state_slope * x_i + constant + a_i (linear + quadratic a_i) )
//
// move_dt = 0 evaluates every candidate at the pre-step position.
struct CostScanParams {
  double x = 0.0;
  double drift_base = 0.0;
  double move_dt = 0.0;
  double lo = 0.0;
  double hi = 1.0;
  double congestion_weight = 0.0;
  double congestion_center = 0.0;
  double softening = 1.0;
  double state_slope = 0.0;
  double constant = 0.0;
  double linear = 0.0;
  double quadratic = 0.0;
  double scale = 1.0;
};

struct KernelTable {
  Isa isa;
  void (*density)(const DensityArgs& args);
  void (*cost_scan)(const CostScanParams& params,
                    std::span<const double> controls, std::span<double> costs);
};

const KernelTable& Kernels();
// Throws std::invalid_argument if `isa` is not supported on this machine.
const KernelTable& KernelsFor(Isa isa);

namespace detail {
const KernelTable& ScalarTable();
const KernelTable* Avx2Table();  // nullptr when not compiled in
const KernelTable* NeonTable();  // nullptr when not compiled in
}  // namespace detail

}  // namespace mfgp::simd

#endif  // MFGP_SIMD_HPP_
