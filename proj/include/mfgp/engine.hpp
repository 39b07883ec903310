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

// Particle method for mean-field games with absorbing boundaries.
//
// A population is represented by N weighted particles. Starting from an
// initial guess, the engine repeats best-reply sweeps: each sweep re-simulates
// the horizon and, at every time step, lets the active particles re-choose
// their control from a finite grid, one at a time in random order, against
// the empirical state-control measure of the rest of the population. The loop
// stops at a sweep in which no particle changes its control (a discrete Nash
// equilibrium) or when the distribution moves less than a threshold.

#ifndef MFGP_ENGINE_HPP_
#define MFGP_ENGINE_HPP_

#include <cstddef>
#include <cstdint>
#include <functional>
#include <limits>
#include <vector>

#include "mfgp/controls.hpp"
#include "mfgp/joint_measure.hpp"
#include "mfgp/measures.hpp"
#include "mfgp/models.hpp"
#include "mfgp/rng.hpp"
#include "mfgp/weak_star.hpp"

namespace mfgp {

enum class SweepMode {
  // Every active particle re-chooses at every step (Gauss-Seidel over
  // (step, particle) pairs).
  kAllParticlesPerStep,
  // Step n re-chooses only the n-th particle of the sweep's random order.
  kOneParticlePerStep,
};

enum class CostEvaluation {
  // Running cost at the deterministic post-step position x + b(alpha) dt.
  kPostStep,
  // Running cost at the pre-step position x.
  kPreStep,
};

struct EngineConfig {
  double dt = 0.004;
  int n_steps = 1000;
  std::uint64_t seed = 0;
  SweepMode sweep_mode = SweepMode::kAllParticlesPerStep;
  CostEvaluation cost_evaluation = CostEvaluation::kPostStep;
  // The deciding particle does not see its own atom.
  bool exclude_self = true;
  int max_sweeps = 20;
  // Converged when a sweep changes no control or when the time-averaged
  // weak-* distance between consecutive sweeps is <= this value.
  double convergence_threshold = 0.0;
  WeakStarMetricConfig metric;
  // Threads used for per-step post-processing. Results do not depend on it.
  int workers = 1;

  void Validate() const;
  double Horizon() const { return dt * n_steps; }
};

inline constexpr int kNeverExited = std::numeric_limits<int>::max();

// Particle states over the time grid t^n = n dt, n = 0..n_steps. Row n holds
// the positions at t^n and the controls applied on [t^n, t^{n+1}); row
// n_steps repeats the last control. A particle with exit step e is active
// at t^n iff n < e; after exiting, position and control stay frozen.
class TrajectorySet {
 public:
  TrajectorySet() = default;
  TrajectorySet(std::size_t n_particles, int n_steps, double dt);

  std::size_t n_particles() const { return n_particles_; }
  int n_steps() const { return n_steps_; }
  double dt() const { return dt_; }
  double Time(int n) const { return n * dt_; }

  double& x(int n, std::size_t k) { return x_[Index(n, k)]; }
  double x(int n, std::size_t k) const { return x_[Index(n, k)]; }
  double& alpha(int n, std::size_t k) { return alpha_[Index(n, k)]; }
  double alpha(int n, std::size_t k) const { return alpha_[Index(n, k)]; }
  double& weight(std::size_t k) { return weight_[k]; }
  double weight(std::size_t k) const { return weight_[k]; }
  int& exit_step(std::size_t k) { return exit_step_[k]; }
  int exit_step(std::size_t k) const { return exit_step_[k]; }

  bool Active(int n, std::size_t k) const { return n < exit_step_[k]; }
  // Exit time tau_k, or +inf if the particle never leaves.
  double ExitTime(std::size_t k) const;

  // Atoms of the particles active at step n, in particle order.
  std::vector<JointAtom> AtomsAt(int n) const;
  std::vector<std::size_t> ActiveAt(int n) const;
  MeasureSummary SummaryAt(int n) const;
  EmpiricalJointMeasure MeasureAt(int n, Interval domain, Interval controls) const;

  bool operator==(const TrajectorySet&) const = default;

 private:
  std::size_t Index(int n, std::size_t k) const {
    return static_cast<std::size_t>(n) * n_particles_ + k;
  }

  std::size_t n_particles_ = 0;
  int n_steps_ = 0;
  double dt_ = 0.0;
  std::vector<double> x_;
  std::vector<double> alpha_;
  std::vector<double> weight_;
  std::vector<int> exit_step_;
};

struct IterationReport {
  int sweep = 0;
  std::int64_t modifications = 0;
  double distribution_change = 0.0;
  bool converged = false;
};

// ---- Initialization and time stepping ----

using DensityFn = std::function<double(double x)>;

struct EnsembleOptions {
  std::size_t n_particles = 600;
  // Quantile placement x_k = F^{-1}((k + 1/2) / N) instead of Monte Carlo.
  bool quantile_sampling = false;
  // Cells used to tabulate the density for inverse-CDF sampling.
  int cdf_cells = 4096;
};

struct Ensemble {
  std::vector<double> x;
  std::vector<double> alpha;
  std::vector<double> weight;
};

// Samples N equally weighted particles from `density` on the model domain by
// inverse CDF, each starting with the extreme grid control pointing at the
// nearest boundary (the lower one on a tie). Throws std::invalid_argument for
// a density that is negative somewhere or has no mass.
Ensemble InitEnsemble(const EnsembleOptions& options, const DensityFn& density,
                      const Interval& domain, const ControlGrid& grid,
                      std::uint64_t seed);

// Extreme grid control toward the nearest boundary point of `domain`.
double InitialControl(double x, const Interval& domain, const ControlGrid& grid);

struct ParticleState {
  double x = 0.0;
  bool active = true;
  // Exit time, set on the step that crosses the boundary.
  double exit_time = std::numeric_limits<double>::infinity();
};

// One Euler-Maruyama step x' = x + drift dt + 2 sqrt(sigma) sqrt(dt) xi. A
// position on or beyond the domain boundary exits the particle at t_next
// and clamps it to the crossed boundary point.
ParticleState StepSde(const ParticleState& particle, double drift, double sigma,
                      double dt, double normal_draw, const Interval& domain,
                      double t_next);

// Simulates the horizon with each particle holding its initial control.
TrajectorySet SimulateInitial(const Ensemble& ensemble, const ModelSpec& model,
                              const EngineConfig& config);

// ---- Best-reply iteration ----

struct SweepResult {
  TrajectorySet trajectories;
  IterationReport report;
};

// One best-reply sweep against `previous`. At step n the measure seen by a
// deciding particle holds every active particle's current position together
// with its already-updated control, or its previous-sweep control if it has
// not decided yet at this step.
SweepResult SweepBestReply(const TrajectorySet& previous, const ModelSpec& model,
                           const ControlGrid& grid, const EngineConfig& config,
                           int sweep_index);

struct EquilibriumResult {
  TrajectorySet trajectories;
  std::vector<IterationReport> reports;
  bool converged = false;
};

// Sweeps from `initial` until convergence or config.max_sweeps.
EquilibriumResult RunToEquilibrium(const TrajectorySet& initial,
                                   const ModelSpec& model, const ControlGrid& grid,
                                   const EngineConfig& config);

// Time average over steps of the weak-* distance between the two sweeps'
// step measures.
double DistributionChange(const TrajectorySet& a, const TrajectorySet& b,
                          const EngineConfig& config);

// Grid controls used in at least `keep_fraction` of all active
// (particle, step) pairs; the two most used controls are always kept.
ControlGrid PruneControlSet(const TrajectorySet& final_sweep, const ControlGrid& grid,
                            double keep_fraction);

// ---- Verification and diagnostics ----

// One-step costs of every grid control for particle k at step n, against the
// step-n measure of `traj` with the configured self-exclusion.
std::vector<double> OneStepCosts(const TrajectorySet& traj, const ModelSpec& model,
                                 const ControlGrid& grid, const EngineConfig& config,
                                 int n, std::size_t k);

struct VerificationReport {
  // max over steps and particles of |alpha - best response| with the
  // measures frozen at `traj`.
  double fixed_point_residual = 0.0;
  std::int64_t deviating_pairs = 0;
};

VerificationReport VerifyEquilibrium(const TrajectorySet& traj, const ModelSpec& model,
                                     const ControlGrid& grid,
                                     const EngineConfig& config);

// u_k(t^n) = sum_{n <= m < exit} dt L(t^m, x^m, alpha^m; mu_m) + psi, and 0
// from the exit step on.
std::vector<double> ValueFunctionTrace(const TrajectorySet& traj,
                                       const ModelSpec& model,
                                       const EngineConfig& config, std::size_t k);

// Particle whose initial position is closest to `x0` (lowest index on ties).
std::size_t ParticleNearest(const TrajectorySet& traj, double x0);

}  // namespace mfgp

#endif  // MFGP_ENGINE_HPP_
