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

// Run configuration: flat `key = value` files with `#` comments.

#ifndef MFGP_CONFIG_HPP_
#define MFGP_CONFIG_HPP_

#include <cstdint>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "mfgp/controls.hpp"
#include "mfgp/engine.hpp"
#include "mfgp/models.hpp"
#include "mfgp/shape_kernel.hpp"

namespace mfgp {

// Syntax error (line > 0) or failed validation (line == 0).
class ConfigError : public std::runtime_error {
 public:
  ConfigError(const std::string& message, int line = 0);
  int line() const { return line_; }

 private:
  int line_;
};

enum class ModelKind { kEvacuation, kRefinancing };

struct RunConfig {
  ModelKind model = ModelKind::kEvacuation;
  double domain_lo = 0.0;
  double domain_hi = 1.0;
  double control_lo = -0.2;
  double control_hi = 0.2;
  std::int64_t n_particles = 600;
  int n_alpha = 11;
  double dt = 0.004;
  double T = 4.0;
  double sigma = 2.5e-9;
  std::uint64_t seed = 0;
  int workers = 1;

  // Initial density: uniform on [init_lo, init_hi].
  double init_lo = 0.5;
  double init_hi = 1.0;
  bool init_quantile = false;

  // Evacuation.
  double eta = 4.0;
  double beta = 1.0;
  double epsilon = 0.5;
  double softening = 0.2;
  double drift_kernel_constant = 0.0;

  // Refinancing.
  double m1 = 0.1;
  bool rho_linear = false;
  double rho_slope = 0.0;
  bool ell_linear = true;
  double ell_scale = 1.0;
  // Bound M on the controls for the parameter gates; 0 means max |control bound|.
  double bound_m = 0.0;

  double kde_bandwidth = 0.02;
  KernelFamily kernel_family = KernelFamily::kCubicBSpline;
  std::vector<double> snapshot_times{0.012, 0.2, 0.8, 1.0, 1.4, 2.4};
  std::vector<double> value_trace_starts{0.6, 0.7, 0.8};

  bool phase1_enabled = true;
  std::int64_t phase1_n_particles = 150;
  double phase1_keep_fraction = 0.01;

  int max_sweeps = 20;
  double convergence_threshold = 0.0;
  SweepMode sweep_mode = SweepMode::kAllParticlesPerStep;
  CostEvaluation cost_evaluation = CostEvaluation::kPostStep;
  bool exclude_self = true;
  double metric_a = 2.0;
  int metric_terms = 20;
  bool emit_plots = true;

  // Throws ConfigError naming the violated constraint.
  void Validate() const;
  int NSteps() const;
  double BoundM() const;
};

RunConfig ParseConfigText(std::string_view text);
// Throws ConfigError, or std::ios_base::failure if the file cannot be read.
RunConfig ParseConfigFile(const std::string& path);

// Every key with its resolved value; ParseConfigText(SerializeConfig(c))
// reproduces c exactly.
std::string SerializeConfig(const RunConfig& config);

std::string_view ModelKindName(ModelKind kind);

ModelSpec BuildModel(const RunConfig& config);
ControlGrid BuildGrid(const RunConfig& config);
EngineConfig BuildEngineConfig(const RunConfig& config);
DensityFn BuildInitialDensity(const RunConfig& config);
// Parameters for the uniqueness gates of the configured alignment cost.
ControlParams BuildControlParams(const RunConfig& config);

// Shortest decimal string that parses back to the same double.
std::string FormatShortest(double v);

}  // namespace mfgp

#endif  // MFGP_CONFIG_HPP_
