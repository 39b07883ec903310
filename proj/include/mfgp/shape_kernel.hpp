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

// Shape functions for reconstructing a density from weighted particles.

#ifndef MFGP_SHAPE_KERNEL_HPP_
#define MFGP_SHAPE_KERNEL_HPP_

#include <span>
#include <string_view>
#include <vector>

#include "mfgp/simd.hpp"

namespace mfgp {

enum class KernelFamily { kCubicBSpline, kQuartic };

std::string_view KernelFamilyName(KernelFamily family);
// Throws std::invalid_argument on an unknown name.
KernelFamily ParseKernelFamily(std::string_view name);

// Radial, compactly supported (unit ball), unit-integral kernel phi scaled to
// phi_eps(x) = phi(x / eps) / eps^d.
class ShapeKernel {
 public:
  ShapeKernel(KernelFamily family, double bandwidth, int dimension = 1);

  KernelFamily family() const { return family_; }
  double bandwidth() const { return bandwidth_; }
  int dimension() const { return dimension_; }

  // phi at unit scale, |u| is the Euclidean norm of the offset.
  double Unit(double radius) const;
  // phi_eps for a d-dimensional offset.
  double operator()(std::span<const double> offset) const;
  // phi_eps for a scalar offset (dimension 1).
  double operator()(double offset) const;

  // c_d in phi(u) = c_d * profile(|u|).
  double NormalizationConstant() const { return norm_; }

 private:
  KernelFamily family_;
  double bandwidth_;
  int dimension_;
  double norm_;
};

// Sum_k w_k phi_eps(query - x_k) for d-dimensional positions stored row-major
// in `positions` (size = weights.size() * d). Empty input gives 0.
double KernelDensity(std::span<const double> positions,
                     std::span<const double> weights, const ShapeKernel& kernel,
                     std::span<const double> query);

// One-dimensional convenience overload.
double KernelDensity(std::span<const double> positions,
                     std::span<const double> weights, const ShapeKernel& kernel,
                     double query);

// Evaluates the 1-d reconstruction at every query using the active SIMD
// kernel table.
std::vector<double> KernelDensityOnGrid(std::span<const double> positions,
                                        std::span<const double> weights,
                                        const ShapeKernel& kernel,
                                        std::span<const double> queries);

}  // namespace mfgp

#endif  // MFGP_SHAPE_KERNEL_HPP_
