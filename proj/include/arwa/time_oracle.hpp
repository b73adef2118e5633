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


// Lab-frame integration of the driven master equation, used as a reference for the
// rotating-frame steady state.

#pragma once

#include <optional>
#include <ostream>
#include <span>
#include <string>
#include <vector>

#include "arwa/model.hpp"

namespace arwa {

struct OracleConfig {
  double rtol = 1e-8;
  double atol = 1e-12;
  /// Fixed observation grid spacing is one drive period over this many points.
  int samples_per_period = 64;
  /// Start of the averaging window. Defaults to 10 max(1/Gamma_min, 1/w_d) where Gamma_min is
  /// the smallest nonzero total decay rate.
  std::optional<double> transient_skip;
  /// Length of the averaging window in drive periods (at least 100).
  int average_periods = 100;
  /// Relative disagreement allowed between the two halves of the window.
  double stationarity_tolerance = 1e-3;
  /// Absolute floor added to the stationarity check, for observables near zero.
  double stationarity_floor = 1e-9;
  /// Integrate from two initial states and report their disagreement.
  bool cross_check_initial_states = false;
  /// Check min eigenvalue of rho every this many samples; 0 disables.
  int eigenvalue_monitor_interval = 64;
  long max_steps = 500'000'000;
};

struct TrajectoryResult {
  std::vector<double> times;
  std::vector<std::string> labels;
  /// expectations[o][j] = <O_o>(times[j]).
  std::vector<std::vector<Complex>> expectations;
  Operator final_state;
  long steps = 0;
  long rejected_steps = 0;
  double max_trace_drift = 0.0;
  double min_eigenvalue = 0.0;
};

/// Integrates from t = 0 to t_end with an adaptive Dormand-Prince 5(4) pair. Observables are
/// sampled on the fixed grid t = sample_start + j * period / samples_per_period.
/// Throws StiffnessError when the step size underflows or max_steps is exceeded.
TrajectoryResult integrate(const LindbladModel& model, const Operator& rho0, double t_end,
                           std::span<const ObservableSpec> observables, const OracleConfig& config = {},
                           double sample_start = 0.0);

struct AverageResult {
  std::vector<std::string> labels;
  /// sqrt(mean |<O>|^2) over the window.
  std::vector<double> magnitudes;
  std::vector<double> first_half;
  std::vector<double> second_half;
  double transient_skip = 0.0;
  double window = 0.0;
  /// Second initial state's magnitudes and the largest relative gap, when cross-checked.
  std::vector<double> alternate_magnitudes;
  double initial_state_deviation = 0.0;
  TrajectoryResult trajectory;
};

double default_transient_skip(const LindbladModel& model);

/// Long-time average starting from rho0 (thermal state when null). Throws NotStationaryError
/// when the window halves disagree.
AverageResult long_time_average(const LindbladModel& model, std::span<const ObservableSpec> observables,
                                const OracleConfig& config = {}, const Operator* rho0 = nullptr);

/// CSV with columns time, re_<label>, im_<label> per observable.
void write_trajectory_csv(std::ostream& os, const TrajectoryResult& trajectory);

}  // namespace arwa
