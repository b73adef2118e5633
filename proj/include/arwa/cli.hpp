// Copyright 2026 The ARWA Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.


#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "arwa/arwa.hpp"
#include "arwa/model_io.hpp"
#include "arwa/sweep.hpp"
#include "arwa/time_oracle.hpp"

namespace arwa::cli {

enum ExitCode : int { kOk = 0, kError = 1, kNotConverged = 2 };

/// Command-line flags; empty/unset values fall back to the config file.
struct CliOptions {
  std::filesystem::path model_path;
  std::filesystem::path config_path;
  std::filesystem::path out_path;
  std::optional<std::string> format;
  std::optional<int> workers;
  std::optional<std::uint64_t> seed;
  bool compare_oracle = false;
  std::filesystem::path trajectory_path;
};

struct SweepAxis {
  std::string axis = "drive_frequency";
  std::vector<double> values;
};

struct OracleRun {
  OracleConfig config;
  /// When set, integrate to this time from t = 0 instead of averaging.
  std::optional<double> t_end;
  /// "thermal", "ground", "excited" or "level:<n>".
  std::string initial_state = "thermal";
};

struct BenchSettings {
  /// Target horizon; defaults to 10 / (slowest channel rate).
  std::optional<double> horizon;
  double measured_fraction = 1e-3;
  int repetitions = 3;
  int synthetic_dim = 15;
};

struct RunConfig {
  Json model_doc;
  std::filesystem::path model_base;
  bool has_model = false;
  ArwaConfig arwa;
  /// Observables to report; empty means all observables of the model.
  std::vector<std::string> observables;
  std::optional<SweepAxis> sweep;
  OracleRun oracle;
  BenchSettings bench;
  int workers = 1;
  std::uint64_t seed = 0;
  std::optional<Ranking> fixed_ranking;
  /// Empty selects the command default: JSON for solve and oracle, CSV for sweep, DOT for graph.
  std::string format;
  std::filesystem::path out_path;
  std::filesystem::path trajectory_path;
  bool compare_oracle = false;
};

/// Parses the config document. Throws ConfigError naming the offending field.
RunConfig parse_run_config(const Json& doc, const std::filesystem::path& base_dir = {});

/// Loads --config, then applies --model and the other flags on top.
RunConfig make_run_config(const CliOptions& options);

LindbladModel build_model(const RunConfig& config);

/// Each command writes its primary output to config.out_path, or to `out` when that is empty,
/// and reports problems on `err`. Return value is the process exit code.
int cmd_solve(const RunConfig& config, std::ostream& out, std::ostream& err);
int cmd_sweep(const RunConfig& config, std::ostream& out, std::ostream& err);
int cmd_graph(const RunConfig& config, std::ostream& out, std::ostream& err);
int cmd_oracle(const RunConfig& config, std::ostream& out, std::ostream& err);
int cmd_bench(const RunConfig& config, std::ostream& out, std::ostream& err);

/// Summary document written by cmd_solve.
Json result_to_json(const ArwaResult& result, const LindbladModel& model, const std::vector<std::string>& observables);

struct BenchReport {
  int dim = 0;
  double arwa_seconds = 0.0;
  double arwa_serial_seconds = 0.0;
  double horizon = 0.0;
  double measured_horizon = 0.0;
  double oracle_seconds = 0.0;
  double extrapolated_oracle_seconds = 0.0;
  double speedup = 0.0;
  bool converged = false;
};

/// Times the adaptive solve (parallel and serial relevance kernels) against lab-frame integration
/// over a fraction of the horizon, extrapolated linearly.
BenchReport run_bench(const LindbladModel& model, const BenchSettings& settings, const ArwaConfig& arwa,
                      const OracleConfig& oracle);

Operator initial_state(const LindbladModel& model, const std::string& spec);

}  // namespace arwa::cli
