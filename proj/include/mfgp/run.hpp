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

// End-to-end runs and their on-disk artifacts.

#ifndef MFGP_RUN_HPP_
#define MFGP_RUN_HPP_

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "mfgp/config.hpp"
#include "mfgp/controls.hpp"
#include "mfgp/engine.hpp"

namespace mfgp {

struct RunResult {
  RunConfig config;
  ControlGrid full_grid = ControlGrid::Uniform(-1.0, 1.0, 2);
  // Grid used by the final phase (the pruned one when phase 1 ran).
  ControlGrid grid = ControlGrid::Uniform(-1.0, 1.0, 2);
  std::vector<IterationReport> phase1_reports;
  bool phase1_converged = false;
  TrajectorySet initial;
  TrajectorySet final;
  std::vector<IterationReport> reports;
  bool converged = false;
  VerificationReport verification;
  double seconds = 0.0;
};

// Optional phase 1 on the reduced ensemble, pruning, then the full run.
RunResult ExecuteRun(const RunConfig& config);

// Rows of mass.csv: t, total_mass, first_moment, center_of_mass.
struct MassRow {
  double t;
  double total_mass;
  double first_moment;
  double center_of_mass;
};
std::vector<MassRow> MassSeries(const TrajectorySet& traj);

// Fixed-width CSV number: 17 significant digits, '.' decimal point, no locale.
std::string FormatCsv(double v);

// File name fragment for a time or position: shortest round-trip decimal.
std::string FileTag(double v);

// Writes every artifact into out_dir (created if missing) and returns the
// manifest text. Throws std::ios_base::failure on I/O errors.
std::string WriteOutputs(const RunResult& result, const std::string& out_dir);

// Summary of an output directory, from its manifest and iterations.csv.
std::string ReportSummary(const std::string& out_dir);

}  // namespace mfgp

#endif  // MFGP_RUN_HPP_
