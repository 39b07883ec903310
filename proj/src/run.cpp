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

#include "mfgp/run.hpp"

#include <algorithm>
#include <charconv>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <limits>
#include <sstream>

#include "mfgp/shape_kernel.hpp"
#include "mfgp/simd.hpp"
#include "mfgp/version.hpp"

namespace mfgp {
namespace {

// Neumaier-compensated sum; equal weights 1/N add up to exactly 1.
class CompensatedSum {
 public:
  void Add(double v) {
    const double t = sum_ + v;
    if (std::abs(sum_) >= std::abs(v)) {
      c_ += (sum_ - t) + v;
    } else {
      c_ += (v - t) + sum_;
    }
    sum_ = t;
  }
  double Value() const { return sum_ + c_; }

 private:
  double sum_ = 0.0;
  double c_ = 0.0;
};

void WriteFile(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw std::ios_base::failure("cannot write '" + path.string() + "'");
  out << text;
  out.close();
  if (!out) throw std::ios_base::failure("error writing '" + path.string() + "'");
}

std::string ReadFile(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::ios_base::failure("cannot read '" + path.string() + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

std::string IterationsCsv(const std::vector<IterationReport>& reports) {
  std::string out = "sweep,modifications,distribution_change,converged\n";
  for (const auto& r : reports) {
    out += std::to_string(r.sweep) + "," + std::to_string(r.modifications) + "," +
           FormatCsv(r.distribution_change) + "," + (r.converged ? "true" : "false") + "\n";
  }
  return out;
}

std::string GridList(const ControlGrid& grid) {
  std::string out;
  for (std::size_t i = 0; i < grid.size(); ++i) {
    if (i) out += ", ";
    out += FormatShortest(grid[i]);
  }
  return out;
}

}  // namespace

RunResult ExecuteRun(const RunConfig& config) {
  const auto start = std::chrono::steady_clock::now();
  config.Validate();
  RunResult result;
  result.config = config;
  const ModelSpec model = BuildModel(config);
  const EngineConfig engine = BuildEngineConfig(config);
  const DensityFn density = BuildInitialDensity(config);
  result.full_grid = BuildGrid(config);
  result.grid = result.full_grid;

  auto initialize = [&](std::int64_t n_particles, const ControlGrid& grid) {
    EnsembleOptions opts;
    opts.n_particles = static_cast<std::size_t>(n_particles);
    opts.quantile_sampling = config.init_quantile;
    const Ensemble e = InitEnsemble(opts, density, model.domain, grid, config.seed);
    return SimulateInitial(e, model, engine);
  };

  if (config.phase1_enabled) {
    const TrajectorySet init1 = initialize(config.phase1_n_particles, result.full_grid);
    const EquilibriumResult phase1 = RunToEquilibrium(init1, model, result.full_grid, engine);
    result.phase1_reports = phase1.reports;
    result.phase1_converged = phase1.converged;
    result.grid =
        PruneControlSet(phase1.trajectories, result.full_grid, config.phase1_keep_fraction);
  }

  result.initial = initialize(config.n_particles, result.grid);
  EquilibriumResult eq = RunToEquilibrium(result.initial, model, result.grid, engine);
  result.reports = std::move(eq.reports);
  result.converged = eq.converged;
  result.final = std::move(eq.trajectories);
  result.verification = VerifyEquilibrium(result.final, model, result.grid, engine);
  result.seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return result;
}

std::vector<MassRow> MassSeries(const TrajectorySet& traj) {
  std::vector<MassRow> rows;
  rows.reserve(static_cast<std::size_t>(traj.n_steps()) + 1);
  for (int n = 0; n <= traj.n_steps(); ++n) {
    CompensatedSum mass, first;
    for (std::size_t k = 0; k < traj.n_particles(); ++k) {
      if (!traj.Active(n, k)) continue;
      mass.Add(traj.weight(k));
      first.Add(traj.weight(k) * traj.x(n, k));
    }
    const double m = mass.Value();
    const double f = first.Value();
    rows.push_back({traj.Time(n), m, f,
                    m > 0.0 ? f / m : std::numeric_limits<double>::quiet_NaN()});
  }
  return rows;
}

std::string FormatCsv(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[64];
  const auto [ptr, ec] =
      std::to_chars(buf, buf + sizeof(buf), v, std::chars_format::general, 17);
  return std::string(buf, ptr);
}

std::string FileTag(double v) { return FormatShortest(v); }

std::string WriteOutputs(const RunResult& result, const std::string& out_dir) {
  namespace fs = std::filesystem;
  const fs::path dir(out_dir);
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec || !fs::is_directory(dir)) {
    throw std::ios_base::failure("cannot create output directory '" + out_dir + "'");
  }
  const RunConfig& cfg = result.config;
  const TrajectorySet& traj = result.final;
  const ModelSpec model = BuildModel(cfg);
  const EngineConfig engine = BuildEngineConfig(cfg);

  std::string mass = "t,total_mass,first_moment,center_of_mass\n";
  for (const auto& r : MassSeries(traj)) {
    mass += FormatCsv(r.t) + "," + FormatCsv(r.total_mass) + "," + FormatCsv(r.first_moment) +
            "," + FormatCsv(r.center_of_mass) + "\n";
  }
  WriteFile(dir / "mass.csv", mass);

  const ShapeKernel kernel(cfg.kernel_family, cfg.kde_bandwidth, 1);
  constexpr int kGridPoints = 512;
  std::vector<double> queries(kGridPoints);
  for (int i = 0; i < kGridPoints; ++i) {
    queries[i] = cfg.domain_lo + (cfg.domain_hi - cfg.domain_lo) * i / (kGridPoints - 1);
  }
  std::vector<std::string> density_files;
  for (const double t : cfg.snapshot_times) {
    const int n = static_cast<int>(std::llround(t / cfg.dt));
    std::vector<double> x, w;
    for (std::size_t k = 0; k < traj.n_particles(); ++k) {
      if (traj.Active(n, k)) {
        x.push_back(traj.x(n, k));
        w.push_back(traj.weight(k));
      }
    }
    const auto rho = KernelDensityOnGrid(x, w, kernel, queries);
    std::string csv = "x,density\n";
    for (int i = 0; i < kGridPoints; ++i) {
      csv += FormatCsv(queries[i]) + "," + FormatCsv(rho[i]) + "\n";
    }
    const std::string name = "density_t" + FileTag(t) + ".csv";
    WriteFile(dir / name, csv);
    density_files.push_back(name);
  }

  WriteFile(dir / "iterations.csv", IterationsCsv(result.reports));
  if (cfg.phase1_enabled) {
    WriteFile(dir / "phase1_iterations.csv", IterationsCsv(result.phase1_reports));
  }

  std::vector<std::string> value_files;
  for (const double x0 : cfg.value_trace_starts) {
    const std::size_t k = ParticleNearest(traj, x0);
    const auto u = ValueFunctionTrace(traj, model, engine, k);
    std::string csv = "t,u\n";
    for (int n = 0; n <= traj.n_steps(); ++n) {
      csv += FormatCsv(traj.Time(n)) + "," + FormatCsv(u[n]) + "\n";
    }
    const std::string name = "value_x" + FileTag(x0) + ".csv";
    WriteFile(dir / name, csv);
    value_files.push_back(name);
  }

  std::string manifest = "# mfgp run manifest\n";
  manifest += "# version = " + std::string(kVersion) + "\n";
  manifest += SerializeConfig(cfg);
  manifest += "# result converged = " + std::string(result.converged ? "true" : "false") + "\n";
  manifest += "# result sweeps = " + std::to_string(result.reports.size()) + "\n";
  manifest += "# result final_modifications = " +
              std::to_string(result.reports.empty() ? -1 : result.reports.back().modifications) +
              "\n";
  if (cfg.phase1_enabled) {
    manifest += "# result phase1_sweeps = " + std::to_string(result.phase1_reports.size()) +
                "\n# result phase1_converged = " +
                std::string(result.phase1_converged ? "true" : "false") + "\n";
  }
  manifest += "# result grid = " + GridList(result.grid) + "\n";
  manifest += "# result fixed_point_residual = " +
              FormatCsv(result.verification.fixed_point_residual) + "\n";
  const auto rows = MassSeries(traj);
  manifest += "# result final_mass = " + FormatCsv(rows.back().total_mass) + "\n";
  WriteFile(dir / "manifest.txt", manifest);

  if (cfg.emit_plots) {
    std::string gp;
    gp += "# gnuplot script over the run's CSV files\n";
    gp += "set datafile separator ','\nset key autotitle columnhead\nset terminal pngcairo size 900,600\n";
    gp += "set output 'mass.png'\nset xlabel 't'\nplot 'mass.csv' using 1:2 with lines title 'total mass'\n";
    gp += "set output 'density.png'\nset xlabel 'x'\nplot";
    for (std::size_t i = 0; i < density_files.size(); ++i) {
      gp += (i ? ", \\\n     '" : " '") + density_files[i] + "' using 1:2 with lines title '" +
            density_files[i] + "'";
    }
    gp += "\n";
    if (!value_files.empty()) {
      gp += "set output 'value.png'\nset xlabel 't'\nplot";
      for (std::size_t i = 0; i < value_files.size(); ++i) {
        gp += (i ? ", \\\n     '" : " '") + value_files[i] + "' using 1:2 with lines title '" +
              value_files[i] + "'";
      }
      gp += "\n";
    }
    gp += "set output 'iterations.png'\nset xlabel 'sweep'\nset logscale y\n"
          "plot 'iterations.csv' using 1:($2+1) with linespoints title 'modifications + 1'\n";
    WriteFile(dir / "plots.gp", gp);
  }
  return manifest;
}

std::string ReportSummary(const std::string& out_dir) {
  namespace fs = std::filesystem;
  const fs::path dir(out_dir);
  const std::string manifest = ReadFile(dir / "manifest.txt");
  const RunConfig cfg = ParseConfigText(manifest);
  std::ostringstream out;
  out << "model            " << ModelKindName(cfg.model) << "\n";
  out << "particles        " << cfg.n_particles << "\n";
  out << "steps            " << cfg.NSteps() << " (dt = " << FormatShortest(cfg.dt) << ")\n";
  out << "seed             " << cfg.seed << "\n";
  std::istringstream lines(manifest);
  for (std::string line; std::getline(lines, line);) {
    const std::string prefix = "# result ";
    if (line.rfind(prefix, 0) == 0) {
      const std::string rest = line.substr(prefix.size());
      const auto eq = rest.find(" = ");
      std::string key = rest.substr(0, eq);
      key.resize(std::max<std::size_t>(key.size(), 17), ' ');
      out << key << (eq == std::string::npos ? "" : rest.substr(eq + 3)) << "\n";
    }
  }
  const std::string iterations = ReadFile(dir / "iterations.csv");
  out << "\nsweep  modifications  distribution_change  converged\n";
  std::istringstream rows(iterations);
  std::string row;
  std::getline(rows, row);
  while (std::getline(rows, row)) {
    std::istringstream cells(row);
    std::string sweep, mods, change, conv;
    std::getline(cells, sweep, ',');
    std::getline(cells, mods, ',');
    std::getline(cells, change, ',');
    std::getline(cells, conv, ',');
    char buf[160];
    std::snprintf(buf, sizeof(buf), "%5s  %13s  %19s  %s\n", sweep.c_str(), mods.c_str(),
                  change.substr(0, 19).c_str(), conv.c_str());
    out << buf;
  }
  return out.str();
}

}  // namespace mfgp
