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

#include "mfgp/engine.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>
#include <string>
#include <thread>

#include "mfgp/simd.hpp"

namespace mfgp {

void EngineConfig::Validate() const {
  if (!(dt > 0.0) || !std::isfinite(dt)) {
    throw std::invalid_argument("engine: dt must be > 0");
  }
  if (n_steps < 1) throw std::invalid_argument("engine: n_steps must be >= 1");
  if (max_sweeps < 0) throw std::invalid_argument("engine: max_sweeps must be >= 0");
  if (!(convergence_threshold >= 0.0)) {
    throw std::invalid_argument("engine: convergence_threshold must be >= 0");
  }
  if (workers < 1) throw std::invalid_argument("engine: workers must be >= 1");
  metric.Validate();
}

TrajectorySet::TrajectorySet(std::size_t n_particles, int n_steps, double dt)
    : n_particles_(n_particles),
      n_steps_(n_steps),
      dt_(dt),
      x_(n_particles * static_cast<std::size_t>(n_steps + 1), 0.0),
      alpha_(n_particles * static_cast<std::size_t>(n_steps + 1), 0.0),
      weight_(n_particles, 0.0),
      exit_step_(n_particles, kNeverExited) {
  if (n_steps < 1) throw std::invalid_argument("TrajectorySet: n_steps must be >= 1");
}

double TrajectorySet::ExitTime(std::size_t k) const {
  if (exit_step_[k] == kNeverExited) return std::numeric_limits<double>::infinity();
  return Time(exit_step_[k]);
}

std::vector<JointAtom> TrajectorySet::AtomsAt(int n) const {
  std::vector<JointAtom> atoms;
  atoms.reserve(n_particles_);
  for (std::size_t k = 0; k < n_particles_; ++k) {
    if (Active(n, k)) atoms.push_back({x(n, k), alpha(n, k), weight_[k]});
  }
  return atoms;
}

std::vector<std::size_t> TrajectorySet::ActiveAt(int n) const {
  std::vector<std::size_t> ids;
  for (std::size_t k = 0; k < n_particles_; ++k) {
    if (Active(n, k)) ids.push_back(k);
  }
  return ids;
}

MeasureSummary TrajectorySet::SummaryAt(int n) const {
  const auto atoms = AtomsAt(n);
  return Summarize(atoms);
}

EmpiricalJointMeasure TrajectorySet::MeasureAt(int n, Interval domain,
                                               Interval controls) const {
  return EmpiricalJointMeasure(domain, controls, AtomsAt(n));
}

// ---- Initialization and time stepping ----

double InitialControl(double x, const Interval& domain, const ControlGrid& grid) {
  const double to_lo = x - domain.lo;
  const double to_hi = domain.hi - x;
  return to_hi < to_lo ? grid.max() : grid.min();
}

Ensemble InitEnsemble(const EnsembleOptions& options, const DensityFn& density,
                      const Interval& domain, const ControlGrid& grid,
                      std::uint64_t seed) {
  if (options.n_particles < 1) {
    throw std::invalid_argument("InitEnsemble: need at least one particle");
  }
  if (options.cdf_cells < 1) throw std::invalid_argument("InitEnsemble: cdf_cells < 1");
  if (!density) throw std::invalid_argument("InitEnsemble: missing density");

  const int cells = options.cdf_cells;
  const double h = domain.Width() / cells;
  std::vector<double> cdf(static_cast<std::size_t>(cells) + 1, 0.0);
  for (int j = 0; j < cells; ++j) {
    const double f = density(domain.lo + (j + 0.5) * h);
    if (!(f >= 0.0) || !std::isfinite(f)) {
      throw std::invalid_argument("InitEnsemble: density must be finite and >= 0");
    }
    cdf[j + 1] = cdf[j] + f * h;
  }
  const double total = cdf.back();
  if (!(total > 0.0)) throw std::invalid_argument("InitEnsemble: density has no mass");

  auto inverse = [&](double u) {
    const double target = u * total;
    auto it = std::upper_bound(cdf.begin(), cdf.end(), target);
    std::ptrdiff_t j = (it - cdf.begin()) - 1;
    j = std::clamp<std::ptrdiff_t>(j, 0, cells - 1);
    while (j > 0 && cdf[j + 1] == cdf[j]) --j;
    const double cell_mass = cdf[j + 1] - cdf[j];
    const double frac =
        cell_mass > 0.0 ? std::clamp((target - cdf[j]) / cell_mass, 0.0, 1.0) : 0.5;
    return domain.lo + (static_cast<double>(j) + frac) * h;
  };

  const std::size_t n = options.n_particles;
  Ensemble e;
  e.x.resize(n);
  e.alpha.resize(n);
  e.weight.assign(n, 1.0 / static_cast<double>(n));
  for (std::size_t k = 0; k < n; ++k) {
    double u;
    if (options.quantile_sampling) {
      u = (static_cast<double>(k) + 0.5) / static_cast<double>(n);
    } else {
      CounterStream s(seed, StreamPurpose::kInitialPosition,
                      static_cast<std::uint32_t>(k), 0u);
      u = s.NextUniform();
    }
    e.x[k] = inverse(u);
    e.alpha[k] = InitialControl(e.x[k], domain, grid);
  }
  return e;
}

ParticleState StepSde(const ParticleState& particle, double drift, double sigma,
                      double dt, double normal_draw, const Interval& domain,
                      double t_next) {
  if (!particle.active) return particle;
  ParticleState next = particle;
  next.x = particle.x + drift * dt + 2.0 * std::sqrt(sigma) * std::sqrt(dt) * normal_draw;
  if (next.x <= domain.lo || next.x >= domain.hi) {
    next.x = next.x <= domain.lo ? domain.lo : domain.hi;
    next.active = false;
    next.exit_time = t_next;
  }
  return next;
}

namespace {

double NoiseDraw(std::uint64_t seed, std::size_t k, int n) {
  CounterStream s(seed, StreamPurpose::kNoise, static_cast<std::uint32_t>(k),
                  static_cast<std::uint32_t>(n));
  return s.NextNormal();
}

// Uniform permutation of `ids` (Fisher-Yates) from the sweep-level stream.
void Shuffle(std::vector<std::size_t>& ids, std::uint64_t seed, int sweep, int n) {
  CounterStream s(seed, StreamPurpose::kVisitOrder, static_cast<std::uint32_t>(sweep),
                  static_cast<std::uint32_t>(n));
  for (std::size_t i = ids.size(); i > 1; --i) {
    const std::size_t j = s.NextBelow(i);
    std::swap(ids[i - 1], ids[j]);
  }
}

// View of `atoms` as seen by atom `self` (or by everyone when self < 0).
MeasureView ViewFor(const MeasureSummary& summary, std::span<const JointAtom> atoms,
                    std::ptrdiff_t self, bool exclude_self) {
  MeasureView view{summary, atoms, -1};
  if (exclude_self && self >= 0) {
    view.summary.Remove(atoms[self]);
    view.excluded = self;
  }
  return view;
}

void ScanCosts(const ModelSpec& model, const ControlGrid& grid, const EngineConfig& config,
               double t, double x, const MeasureView& view, std::span<double> costs) {
  const double move_dt =
      config.cost_evaluation == CostEvaluation::kPostStep ? config.dt : 0.0;
  if (model.cost_form) {
    simd::CostScanParams p = model.cost_form(t, x, view);
    p.move_dt = move_dt;
    p.lo = model.domain.lo;
    p.hi = model.domain.hi;
    p.scale = config.dt;
    simd::Kernels().cost_scan(p, grid.points(), costs);
    return;
  }
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const double a = grid[i];
    double xe = x;
    if (move_dt > 0.0) {
      xe = std::clamp(x + model.drift(t, x, a, view) * move_dt, model.domain.lo,
                      model.domain.hi);
    }
    costs[i] = config.dt * model.lagrangian(t, xe, a, view);
  }
}

void RunParallel(int workers, int count, const std::function<void(int)>& body) {
  if (workers <= 1 || count <= 1) {
    for (int i = 0; i < count; ++i) body(i);
    return;
  }
  const int w = std::min(workers, count);
  std::vector<std::thread> threads;
  threads.reserve(w);
  for (int t = 0; t < w; ++t) {
    threads.emplace_back([&, t] {
      for (int i = t; i < count; i += w) body(i);
    });
  }
  for (auto& th : threads) th.join();
}

}  // namespace

TrajectorySet SimulateInitial(const Ensemble& ensemble, const ModelSpec& model,
                              const EngineConfig& config) {
  config.Validate();
  model.Validate();
  const std::size_t n_particles = ensemble.x.size();
  if (ensemble.alpha.size() != n_particles || ensemble.weight.size() != n_particles) {
    throw std::invalid_argument("SimulateInitial: ensemble arrays differ in length");
  }
  TrajectorySet traj(n_particles, config.n_steps, config.dt);
  for (std::size_t k = 0; k < n_particles; ++k) {
    if (!model.domain.Contains(ensemble.x[k])) {
      throw std::invalid_argument("SimulateInitial: particle outside the domain");
    }
    traj.weight(k) = ensemble.weight[k];
    traj.x(0, k) = ensemble.x[k];
  }
  std::vector<JointAtom> atoms;
  for (int n = 0; n < config.n_steps; ++n) {
    atoms.clear();
    std::vector<std::size_t> ids;
    for (std::size_t k = 0; k < n_particles; ++k) {
      if (traj.Active(n, k)) {
        atoms.push_back({traj.x(n, k), ensemble.alpha[k], traj.weight(k)});
        ids.push_back(k);
      }
    }
    const MeasureSummary summary = Summarize(atoms);
    for (std::size_t i = 0; i < ids.size(); ++i) {
      const std::size_t k = ids[i];
      traj.alpha(n, k) = ensemble.alpha[k];
      const MeasureView view =
          ViewFor(summary, atoms, static_cast<std::ptrdiff_t>(i), config.exclude_self);
      const double b = model.drift(traj.Time(n), traj.x(n, k), ensemble.alpha[k], view);
      const ParticleState next =
          StepSde({traj.x(n, k), true}, b, model.sigma, config.dt,
                  NoiseDraw(config.seed, k, n), model.domain, traj.Time(n + 1));
      traj.x(n + 1, k) = next.x;
      if (!next.active) traj.exit_step(k) = n + 1;
    }
    for (std::size_t k = 0; k < n_particles; ++k) {
      if (!traj.Active(n, k)) {
        traj.x(n + 1, k) = traj.x(n, k);
        traj.alpha(n, k) = n > 0 ? traj.alpha(n - 1, k) : ensemble.alpha[k];
      }
    }
  }
  for (std::size_t k = 0; k < n_particles; ++k) {
    traj.alpha(config.n_steps, k) = traj.alpha(config.n_steps - 1, k);
  }
  return traj;
}

// ---- Best-reply iteration ----

SweepResult SweepBestReply(const TrajectorySet& previous, const ModelSpec& model,
                           const ControlGrid& grid, const EngineConfig& config,
                           int sweep_index) {
  const std::size_t n_particles = previous.n_particles();
  const int n_steps = previous.n_steps();
  if (n_steps != config.n_steps || previous.dt() != config.dt) {
    throw std::invalid_argument("SweepBestReply: trajectories do not match the config");
  }
  TrajectorySet traj(n_particles, n_steps, config.dt);
  for (std::size_t k = 0; k < n_particles; ++k) {
    traj.weight(k) = previous.weight(k);
    traj.x(0, k) = previous.x(0, k);
  }

  SweepResult result;
  result.report.sweep = sweep_index;
  std::int64_t modifications = 0;
  std::vector<double> costs(grid.size());
  std::vector<JointAtom> atoms;
  std::vector<std::size_t> ids;
  std::vector<std::size_t> order;
  std::vector<std::size_t> single_order;
  if (config.sweep_mode == SweepMode::kOneParticlePerStep) {
    single_order.resize(n_particles);
    std::iota(single_order.begin(), single_order.end(), std::size_t{0});
    Shuffle(single_order, config.seed, sweep_index, -1);
  }

  for (int n = 0; n < n_steps; ++n) {
    const double t = traj.Time(n);
    // Particles not yet visited at this step enter with their previous-sweep
    // state; a visit moves the atom to the current position and new control.
    atoms.clear();
    ids.clear();
    for (std::size_t k = 0; k < n_particles; ++k) {
      if (traj.Active(n, k)) {
        const double x_old = previous.Active(n, k) ? previous.x(n, k) : traj.x(n, k);
        atoms.push_back({x_old, previous.alpha(n, k), traj.weight(k)});
        ids.push_back(k);
      }
    }
    MeasureSummary summary = Summarize(atoms);

    order.resize(ids.size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    if (config.sweep_mode == SweepMode::kAllParticlesPerStep) {
      Shuffle(order, config.seed, sweep_index, n);
    } else {
      // Only the n-th particle of the sweep order decides, if still active.
      order.clear();
      const std::size_t chosen = single_order[static_cast<std::size_t>(n) % n_particles];
      const auto it = std::lower_bound(ids.begin(), ids.end(), chosen);
      if (it != ids.end() && *it == chosen) {
        order.push_back(static_cast<std::size_t>(it - ids.begin()));
      }
    }

    for (const std::size_t i : order) {
      const std::size_t k = ids[i];
      const MeasureView view =
          ViewFor(summary, atoms, static_cast<std::ptrdiff_t>(i), config.exclude_self);
      ScanCosts(model, grid, config, t, traj.x(n, k), view, costs);
      const double chosen = grid[ArgMinCost(costs)];
      if (!previous.Active(n, k) || chosen != atoms[i].alpha) ++modifications;
      summary.Remove(atoms[i]);
      atoms[i].x = traj.x(n, k);
      atoms[i].alpha = chosen;
      summary.Add(atoms[i]);
    }

    for (std::size_t i = 0; i < ids.size(); ++i) atoms[i].x = traj.x(n, ids[i]);
    summary = Summarize(atoms);

    for (std::size_t i = 0; i < ids.size(); ++i) {
      const std::size_t k = ids[i];
      traj.alpha(n, k) = atoms[i].alpha;
      const MeasureView view =
          ViewFor(summary, atoms, static_cast<std::ptrdiff_t>(i), config.exclude_self);
      const double b = model.drift(t, atoms[i].x, atoms[i].alpha, view);
      const ParticleState next =
          StepSde({atoms[i].x, true}, b, model.sigma, config.dt,
                  NoiseDraw(config.seed, k, n), model.domain, traj.Time(n + 1));
      traj.x(n + 1, k) = next.x;
      if (!next.active) traj.exit_step(k) = n + 1;
    }
    for (std::size_t k = 0; k < n_particles; ++k) {
      if (!traj.Active(n, k)) {
        traj.x(n + 1, k) = traj.x(n, k);
        traj.alpha(n, k) = n > 0 ? traj.alpha(n - 1, k) : previous.alpha(0, k);
      }
    }
  }
  for (std::size_t k = 0; k < n_particles; ++k) {
    traj.alpha(n_steps, k) = traj.alpha(n_steps - 1, k);
  }

  result.report.modifications = modifications;
  result.report.distribution_change = DistributionChange(previous, traj, config);
  result.report.converged =
      modifications == 0 ||
      result.report.distribution_change <= config.convergence_threshold;
  result.trajectories = std::move(traj);
  return result;
}

EquilibriumResult RunToEquilibrium(const TrajectorySet& initial, const ModelSpec& model,
                                   const ControlGrid& grid, const EngineConfig& config) {
  config.Validate();
  model.Validate();
  EquilibriumResult out;
  out.trajectories = initial;
  for (int j = 1; j <= config.max_sweeps; ++j) {
    SweepResult sweep = SweepBestReply(out.trajectories, model, grid, config, j);
    out.reports.push_back(sweep.report);
    out.trajectories = std::move(sweep.trajectories);
    if (sweep.report.converged) {
      out.converged = true;
      break;
    }
  }
  return out;
}

double DistributionChange(const TrajectorySet& a, const TrajectorySet& b,
                          const EngineConfig& config) {
  if (a.n_steps() != b.n_steps()) {
    throw std::invalid_argument("DistributionChange: step counts differ");
  }
  const int steps = a.n_steps() + 1;
  const int terms = config.metric.max_terms;
  std::vector<double> per_step(static_cast<std::size_t>(steps), 0.0);

  auto moments = [terms](const TrajectorySet& traj, int n) {
    std::vector<double> x, alpha, w;
    for (std::size_t k = 0; k < traj.n_particles(); ++k) {
      if (traj.Active(n, k)) {
        x.push_back(traj.x(n, k));
        alpha.push_back(traj.alpha(n, k));
        w.push_back(traj.weight(k));
      }
    }
    return MonomialMoments(x, alpha, w, terms);
  };
  RunParallel(config.workers, steps, [&](int n) {
    per_step[n] = WeakStarDistanceFromMoments(moments(a, n), moments(b, n), config.metric.a);
  });
  double sum = 0.0;
  for (const double d : per_step) sum += d;
  return sum / steps;
}

ControlGrid PruneControlSet(const TrajectorySet& final_sweep, const ControlGrid& grid,
                            double keep_fraction) {
  if (!(keep_fraction >= 0.0 && keep_fraction <= 1.0)) {
    throw std::invalid_argument("PruneControlSet: keep_fraction must be in [0, 1]");
  }
  std::vector<std::int64_t> counts(grid.size(), 0);
  std::int64_t total = 0;
  for (int n = 0; n < final_sweep.n_steps(); ++n) {
    for (std::size_t k = 0; k < final_sweep.n_particles(); ++k) {
      if (!final_sweep.Active(n, k)) continue;
      const auto idx = grid.IndexOf(final_sweep.alpha(n, k));
      if (!idx) throw std::invalid_argument("PruneControlSet: control not on the grid");
      ++counts[*idx];
      ++total;
    }
  }
  std::vector<double> kept;
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const double freq = total > 0 ? static_cast<double>(counts[i]) / total : 0.0;
    if (freq >= keep_fraction) kept.push_back(grid[i]);
  }
  if (kept.size() < 2) {
    std::vector<std::size_t> rank(grid.size());
    std::iota(rank.begin(), rank.end(), std::size_t{0});
    std::stable_sort(rank.begin(), rank.end(),
                     [&](std::size_t l, std::size_t r) { return counts[l] > counts[r]; });
    for (std::size_t i = 0; kept.size() < 2 && i < rank.size(); ++i) {
      const double c = grid[rank[i]];
      if (std::find(kept.begin(), kept.end(), c) == kept.end()) kept.push_back(c);
    }
  }
  return ControlGrid(std::move(kept));
}

// ---- Verification and diagnostics ----

std::vector<double> OneStepCosts(const TrajectorySet& traj, const ModelSpec& model,
                                 const ControlGrid& grid, const EngineConfig& config,
                                 int n, std::size_t k) {
  if (!traj.Active(n, k)) {
    throw std::invalid_argument("OneStepCosts: particle not active at this step");
  }
  const auto atoms = traj.AtomsAt(n);
  const auto ids = traj.ActiveAt(n);
  const auto self = std::lower_bound(ids.begin(), ids.end(), k) - ids.begin();
  const MeasureView view = ViewFor(Summarize(atoms), atoms, self, config.exclude_self);
  std::vector<double> costs(grid.size());
  ScanCosts(model, grid, config, traj.Time(n), traj.x(n, k), view, costs);
  return costs;
}

VerificationReport VerifyEquilibrium(const TrajectorySet& traj, const ModelSpec& model,
                                     const ControlGrid& grid,
                                     const EngineConfig& config) {
  const int steps = traj.n_steps();
  std::vector<double> residual(static_cast<std::size_t>(steps), 0.0);
  std::vector<std::int64_t> deviating(static_cast<std::size_t>(steps), 0);
  RunParallel(config.workers, steps, [&](int n) {
    const auto atoms = traj.AtomsAt(n);
    const auto ids = traj.ActiveAt(n);
    const MeasureSummary summary = Summarize(atoms);
    std::vector<double> costs(grid.size());
    for (std::size_t i = 0; i < ids.size(); ++i) {
      const MeasureView view =
          ViewFor(summary, atoms, static_cast<std::ptrdiff_t>(i), config.exclude_self);
      ScanCosts(model, grid, config, traj.Time(n), atoms[i].x, view, costs);
      const double best = grid[ArgMinCost(costs)];
      const double diff = std::abs(atoms[i].alpha - best);
      if (diff > 0.0) ++deviating[n];
      residual[n] = std::max(residual[n], diff);
    }
  });
  VerificationReport report;
  for (int n = 0; n < steps; ++n) {
    report.fixed_point_residual = std::max(report.fixed_point_residual, residual[n]);
    report.deviating_pairs += deviating[n];
  }
  return report;
}

std::vector<double> ValueFunctionTrace(const TrajectorySet& traj, const ModelSpec& model,
                                       const EngineConfig& config, std::size_t k) {
  if (k >= traj.n_particles()) throw std::out_of_range("ValueFunctionTrace: bad particle");
  const int steps = traj.n_steps();
  std::vector<double> u(static_cast<std::size_t>(steps) + 1, 0.0);
  const int last = std::min(traj.exit_step(k), steps);
  if (traj.exit_step(k) > steps && model.terminal_cost) {
    u[steps] = model.terminal_cost(traj.x(steps, k), traj.SummaryAt(steps).mass);
  }
  for (int n = last - 1; n >= 0; --n) {
    const auto atoms = traj.AtomsAt(n);
    const auto ids = traj.ActiveAt(n);
    const auto self = std::lower_bound(ids.begin(), ids.end(), k) - ids.begin();
    const MeasureView view = ViewFor(Summarize(atoms), atoms, self, config.exclude_self);
    double next = u[n + 1];
    if (n + 1 == traj.exit_step(k) && model.terminal_cost) {
      next = model.terminal_cost(traj.x(n + 1, k), traj.SummaryAt(n + 1).mass);
    }
    u[n] = next + traj.dt() * model.lagrangian(traj.Time(n), traj.x(n, k),
                                               traj.alpha(n, k), view);
  }
  return u;
}

std::size_t ParticleNearest(const TrajectorySet& traj, double x0) {
  if (traj.n_particles() == 0) throw std::invalid_argument("ParticleNearest: empty set");
  std::size_t best = 0;
  double best_d = std::abs(traj.x(0, 0) - x0);
  for (std::size_t k = 1; k < traj.n_particles(); ++k) {
    const double d = std::abs(traj.x(0, k) - x0);
    if (d < best_d) {
      best = k;
      best_d = d;
    }
  }
  return best;
}

}  // namespace mfgp
