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

// mfgp command line: run, validate, report.
//
// Exit codes: 0 success, 1 validation failure, 2 non-convergence, 3 I/O error.

#include <cstdio>
#include <exception>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>

#include "CLI11.hpp"
#include "mfgp/config.hpp"
#include "mfgp/run.hpp"
#include "mfgp/simd.hpp"
#include "mfgp/validate.hpp"
#include "mfgp/version.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitInvalid = 1;
constexpr int kExitNotConverged = 2;
constexpr int kExitIo = 3;

int RunCommand(const std::string& config_path, const std::string& out_dir,
               std::optional<std::uint64_t> seed) {
  mfgp::RunConfig cfg = mfgp::ParseConfigFile(config_path);
  if (seed) cfg.seed = *seed;
  std::cerr << "mfgp: model " << mfgp::ModelKindName(cfg.model) << ", N = " << cfg.n_particles
            << ", steps = " << cfg.NSteps() << ", simd = "
            << mfgp::simd::IsaName(mfgp::simd::ActiveIsa()) << "\n";
  const mfgp::RunResult result = mfgp::ExecuteRun(cfg);
  mfgp::WriteOutputs(result, out_dir);
  for (const auto& r : result.phase1_reports) {
    std::cerr << "  phase 1 sweep " << r.sweep << ": " << r.modifications
              << " modifications\n";
  }
  for (const auto& r : result.reports) {
    std::cerr << "  sweep " << r.sweep << ": " << r.modifications << " modifications\n";
  }
  std::cerr << "mfgp: " << (result.converged ? "converged" : "NOT converged") << " after "
            << result.reports.size() << " sweeps in " << result.seconds << " s; outputs in "
            << out_dir << "\n";
  return result.converged ? kExitOk : kExitNotConverged;
}

int ValidateCommand(const std::string& config_path) {
  const mfgp::RunConfig cfg = mfgp::ParseConfigFile(config_path);
  const mfgp::ValidationOutcome outcome = mfgp::ValidateRunConfig(cfg);
  for (const auto& line : outcome.lines) std::cout << line << "\n";
  std::cout << (outcome.pass ? "valid" : "INVALID") << "\n";
  return outcome.pass ? kExitOk : kExitInvalid;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Particle solver for mean-field games with absorbing boundaries"};
  app.set_version_flag("--version", std::string(mfgp::kVersion));
  app.require_subcommand(1);

  std::string config_path;
  std::string out_dir;
  std::optional<std::uint64_t> seed;

  auto* run = app.add_subcommand("run", "Run a configuration and write its outputs");
  run->add_option("--config", config_path, "Configuration file")->required();
  run->add_option("--out", out_dir, "Output directory")->required();
  run->add_option("--seed", seed, "Override the configured seed");

  auto* validate = app.add_subcommand("validate", "Check parameters and monotonicity");
  validate->add_option("--config", config_path, "Configuration file")->required();

  auto* report = app.add_subcommand("report", "Summarize an output directory");
  report->add_option("--out", out_dir, "Output directory")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitInvalid;
  }

  try {
    if (*run) return RunCommand(config_path, out_dir, seed);
    if (*validate) return ValidateCommand(config_path);
    if (*report) {
      std::cout << mfgp::ReportSummary(out_dir);
      return kExitOk;
    }
  } catch (const std::ios_base::failure& e) {
    std::cerr << "mfgp: " << e.what() << "\n";
    return kExitIo;
  } catch (const std::filesystem::filesystem_error& e) {
    std::cerr << "mfgp: " << e.what() << "\n";
    return kExitIo;
  } catch (const std::exception& e) {
    std::cerr << "mfgp: " << e.what() << "\n";
    return kExitInvalid;
  }
  return kExitInvalid;
}
