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

// Model definitions consumed by the particle engine.

#ifndef MFGP_MODELS_HPP_
#define MFGP_MODELS_HPP_

#include <functional>
#include <optional>
#include <string>

#include "mfgp/joint_measure.hpp"
#include "mfgp/measures.hpp"
#include "mfgp/simd.hpp"

namespace mfgp {

using DriftFn =
    std::function<double(double t, double x, double alpha, const MeasureView& mu)>;
using TerminalCostFn = std::function<double(double x, double mass)>;

// Optional fast path: the one-step cost of every grid control as a
// simd::CostScanParams. The engine fills move_dt, lo, hi and scale; the model
// fills the rest. It must describe the same drift and Lagrangian as the
// callbacks, with drift = drift_base + alpha.
using CostFormFn =
    std::function<simd::CostScanParams(double t, double x, const MeasureView& mu)>;

struct ModelSpec {
  std::string name;
  Interval domain{0.0, 1.0};
  Interval controls{-1.0, 1.0};
  // Diffusion coefficient sigma in dX = b dt + 2 sqrt(sigma) dW.
  double sigma = 0.0;
  DriftFn drift;
  Lagrangian lagrangian;
  TerminalCostFn terminal_cost;
  // True when the callbacks read individual atoms (convolutions), not just
  // MeasureView::summary.
  bool needs_atoms = false;
  CostFormFn cost_form;

  // Throws std::invalid_argument on missing callbacks or bad bounds.
  void Validate() const;
};

// Pedestrian evacuation in 1-d: congestion relative to the population's
// first moment, alignment with the mean control, quadratic effort.
struct EvacuationParams {
  double eta = 4.0;
  double beta = 1.0;
  double epsilon = 0.5;
  double softening = 0.2;
  // Drift kernel K in dX = (K * m)(X) dt + alpha dt; empty means K = 0.
  ScalarKernel drift_kernel;
  // When set, congestion is the convolution (Q * m)(x) instead of
  // eta / (|first moment - x| + softening).
  ScalarKernel congestion_kernel;

  void Validate() const;
};

double EvacuationLagrangian(double t, double x, double alpha, const MeasureView& mu,
                            const EvacuationParams& params);
double EvacuationDrift(double t, double x, double alpha, const MeasureView& mu,
                       const EvacuationParams& params);

ModelSpec MakeEvacuationModel(const EvacuationParams& params, Interval domain,
                              Interval controls, double sigma);

// Debt refinancing: rate rho(Theta) on the outstanding stock, linear
// alignment cost g = M1 alpha Theta, running cost ell(t, x).
struct RefinancingParams {
  double m1 = 0.1;
  double epsilon = 0.5;
  // rho; empty means rho = 0.
  std::function<double(double)> rho;
  // Default running cost ell(t, x) = ell_scale (1 + x) / 2.
  double ell_scale = 1.0;
  // Overrides the default running cost when set.
  std::function<double(double t, double x)> running_cost;

  void Validate() const;
  double Rho(double theta) const { return rho ? rho(theta) : 0.0; }
  double RunningCost(double t, double x) const;
};

double RefinancingLagrangian(double t, double x, double alpha, const MeasureView& mu,
                             const RefinancingParams& params);
double RefinancingDrift(double t, double x, double alpha, const MeasureView& mu,
                        const RefinancingParams& params);

ModelSpec MakeRefinancingModel(const RefinancingParams& params, Interval domain,
                               Interval controls, double sigma);

}  // namespace mfgp

#endif  // MFGP_MODELS_HPP_
