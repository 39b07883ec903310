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

#include "mfgp/shape_kernel.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

namespace mfgp {
namespace {

simd::KernelShape ToShape(KernelFamily family) {
  return family == KernelFamily::kCubicBSpline ? simd::KernelShape::kCubicBSpline
                                               : simd::KernelShape::kQuartic;
}

// Unit-ball normalizations of the radial profiles.
double Normalization(KernelFamily family, int d) {
  constexpr double kPi = std::numbers::pi;
  if (family == KernelFamily::kCubicBSpline) {
    switch (d) {
      case 1:
        return 4.0 / 3.0;
      case 2:
        return 40.0 / (7.0 * kPi);
      case 3:
        return 8.0 / kPi;
    }
  } else {
    switch (d) {
      case 1:
        return 15.0 / 16.0;
      case 2:
        return 3.0 / kPi;
      case 3:
        return 105.0 / (32.0 * kPi);
    }
  }
  throw std::invalid_argument("ShapeKernel: dimension must be 1, 2 or 3");
}

}  // namespace

std::string_view KernelFamilyName(KernelFamily family) {
  return family == KernelFamily::kCubicBSpline ? "cubic_bspline" : "quartic";
}

KernelFamily ParseKernelFamily(std::string_view name) {
  if (name == "cubic_bspline") return KernelFamily::kCubicBSpline;
  if (name == "quartic") return KernelFamily::kQuartic;
  throw std::invalid_argument("unknown kernel family '" + std::string(name) + "'");
}

ShapeKernel::ShapeKernel(KernelFamily family, double bandwidth, int dimension)
    : family_(family),
      bandwidth_(bandwidth),
      dimension_(dimension),
      norm_(Normalization(family, dimension)) {
  if (!(bandwidth > 0.0) || !std::isfinite(bandwidth)) {
    throw std::invalid_argument("ShapeKernel: bandwidth must be positive");
  }
}

double ShapeKernel::Unit(double radius) const {
  return norm_ * simd::ShapeProfile(ToShape(family_), std::abs(radius));
}

double ShapeKernel::operator()(std::span<const double> offset) const {
  if (static_cast<int>(offset.size()) != dimension_) {
    throw std::invalid_argument("ShapeKernel: offset has wrong dimension");
  }
  double r2 = 0.0;
  for (double v : offset) r2 += v * v;
  const double r = std::sqrt(r2) / bandwidth_;
  return Unit(r) / std::pow(bandwidth_, dimension_);
}

double ShapeKernel::operator()(double offset) const {
  const double one[] = {offset};
  return (*this)(std::span<const double>(one));
}

double KernelDensity(std::span<const double> positions,
                     std::span<const double> weights, const ShapeKernel& kernel,
                     std::span<const double> query) {
  const auto d = static_cast<std::size_t>(kernel.dimension());
  if (query.size() != d || positions.size() != weights.size() * d) {
    throw std::invalid_argument("KernelDensity: dimension mismatch");
  }
  std::vector<double> offset(d);
  double acc = 0.0;
  for (std::size_t k = 0; k < weights.size(); ++k) {
    for (std::size_t i = 0; i < d; ++i) offset[i] = query[i] - positions[k * d + i];
    acc += weights[k] * kernel(offset);
  }
  return acc;
}

double KernelDensity(std::span<const double> positions,
                     std::span<const double> weights, const ShapeKernel& kernel,
                     double query) {
  const double q[] = {query};
  return KernelDensity(positions, weights, kernel, std::span<const double>(q));
}

std::vector<double> KernelDensityOnGrid(std::span<const double> positions,
                                        std::span<const double> weights,
                                        const ShapeKernel& kernel,
                                        std::span<const double> queries) {
  if (kernel.dimension() != 1 || positions.size() != weights.size()) {
    throw std::invalid_argument("KernelDensityOnGrid: 1-d positions required");
  }
  std::vector<double> out(queries.size());
  simd::DensityArgs args;
  args.queries = queries;
  args.atom_x = positions;
  args.atom_w = weights;
  args.inv_bandwidth = 1.0 / kernel.bandwidth();
  args.norm = kernel.NormalizationConstant() / kernel.bandwidth();
  args.shape = ToShape(kernel.family());
  args.out = out;
  simd::Kernels().density(args);
  return out;
}

}  // namespace mfgp
