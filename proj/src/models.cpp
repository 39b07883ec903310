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

#include "mfgp/models.hpp"

#include <cmath>
#include <stdexcept>

namespace mfgp {

void ModelSpec::Validate() const {
  if (!drift || !lagrangian) {
    throw std::invalid_argument("model '" + name + "': drift and Lagrangian are required");
  }
  if (!(domain.lo < domain.hi)) {
    throw std::invalid_argument("model '" + name + "': empty domain");
  }
  if (!(controls.lo <= controls.hi)) {
    throw std::invalid_argument("model '" + name + "': empty control set");
  }
  if (!(sigma >= 0.0)) {
    throw std::invalid_argument("model '" + name + "': sigma must be >= 0");
  }
}

void EvacuationParams::Validate() const {
  if (eta < 0.0 || epsilon < 0.0) {
    throw std::invalid_argument("evacuation: eta and epsilon must be >= 0");
  }
  // A decreasing alignment cost (beta < 0) is only paired with a congestion
  // kernel bounded below.
  if (beta < 0.0 && !congestion_kernel) {
    throw std::invalid_argument("evacuation: beta must be >= 0");
  }
  if (!(softening > 0.0)) {
    throw std::invalid_argument("evacuation: softening must be > 0");
  }
}

double EvacuationLagrangian(double /*t*/, double x, double alpha,
                            const MeasureView& mu, const EvacuationParams& params) {
  const double congestion =
      params.congestion_kernel
          ? Convolve(params.congestion_kernel, mu, x)
          : params.eta / (std::abs(mu.summary.first_moment - x) + params.softening);
  return congestion + params.beta * alpha * mu.summary.theta +
         params.epsilon * alpha * alpha;
}

double EvacuationDrift(double /*t*/, double x, double alpha, const MeasureView& mu,
                       const EvacuationParams& params) {
  const double base = params.drift_kernel ? Convolve(params.drift_kernel, mu, x) : 0.0;
  return base + alpha;
}

ModelSpec MakeEvacuationModel(const EvacuationParams& params, Interval domain,
                              Interval controls, double sigma) {
  params.Validate();
  ModelSpec spec;
  spec.name = "evacuation";
  spec.domain = domain;
  spec.controls = controls;
  spec.sigma = sigma;
  spec.drift = [params](double t, double x, double a, const MeasureView& mu) {
    return EvacuationDrift(t, x, a, mu, params);
  };
  spec.lagrangian = [params](double t, double x, double a, const MeasureView& mu) {
    return EvacuationLagrangian(t, x, a, mu, params);
  };
  spec.terminal_cost = [](double, double) { return 0.0; };
  spec.needs_atoms = static_cast<bool>(params.drift_kernel) ||
                     static_cast<bool>(params.congestion_kernel);
  if (!params.congestion_kernel) {
    spec.cost_form = [params](double, double x, const MeasureView& mu) {
      simd::CostScanParams p;
      p.x = x;
      p.drift_base =
          params.drift_kernel ? Convolve(params.drift_kernel, mu, x) : 0.0;
      p.congestion_weight = params.eta;
      p.congestion_center = mu.summary.first_moment;
      p.softening = params.softening;
      p.linear = params.beta * mu.summary.theta;
      p.quadratic = params.epsilon;
      return p;
    };
  }
  return spec;
}

void RefinancingParams::Validate() const {
  if (!(epsilon > 0.0)) throw std::invalid_argument("refinancing: epsilon must be > 0");
  if (m1 < 0.0) throw std::invalid_argument("refinancing: M1 must be >= 0");
}

double RefinancingParams::RunningCost(double t, double x) const {
  if (running_cost) return running_cost(t, x);
  return ell_scale * (1.0 + x) / 2.0;
}

double RefinancingLagrangian(double t, double x, double alpha, const MeasureView& mu,
                             const RefinancingParams& params) {
  return params.RunningCost(t, x) + params.m1 * alpha * mu.summary.theta +
         params.epsilon * alpha * alpha;
}

double RefinancingDrift(double /*t*/, double x, double alpha, const MeasureView& mu,
                        const RefinancingParams& params) {
  return (1.0 + params.Rho(mu.summary.theta)) * x + alpha;
}

ModelSpec MakeRefinancingModel(const RefinancingParams& params, Interval domain,
                               Interval controls, double sigma) {
  params.Validate();
  ModelSpec spec;
  spec.name = "refinancing";
  spec.domain = domain;
  spec.controls = controls;
  spec.sigma = sigma;
  spec.drift = [params](double t, double x, double a, const MeasureView& mu) {
    return RefinancingDrift(t, x, a, mu, params);
  };
  spec.lagrangian = [params](double t, double x, double a, const MeasureView& mu) {
    return RefinancingLagrangian(t, x, a, mu, params);
  };
  spec.terminal_cost = [](double, double) { return 0.0; };
  if (!params.running_cost) {
    spec.cost_form = [params](double, double x, const MeasureView& mu) {
      simd::CostScanParams p;
      p.x = x;
      p.drift_base = (1.0 + params.Rho(mu.summary.theta)) * x;
      p.softening = 1.0;
      p.state_slope = params.ell_scale / 2.0;
      p.constant = params.ell_scale / 2.0;
      p.linear = params.m1 * mu.summary.theta;
      p.quadratic = params.epsilon;
      return p;
    };
  }
  return spec;
}

}  // namespace mfgp
