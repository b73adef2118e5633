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


#include <cmath>
#include <numbers>
#include <sstream>

#include "doctest.h"
#include "oracles.hpp"

#include "arwa/errors.hpp"
#include "arwa/systems.hpp"
#include "arwa/time_oracle.hpp"

using namespace arwa;

namespace {

LindbladModel decaying_qubit(double gamma) {
  LindbladModel m;
  m.energies = {0.0, 1.0};
  m.drive_frequency = 1.0;
  add_transition(m, 0, 1, gamma);
  return m;
}

std::vector<ObservableSpec> observables_of(const LindbladModel& m, std::initializer_list<const char*> labels) {
  std::vector<ObservableSpec> out;
  for (const char* l : labels) out.push_back(*m.find_observable(l));
  return out;
}

}  // namespace

TEST_CASE("undriven thermal state is a fixed point") {
  const double w = 2.0 * std::numbers::pi * 5e9;
  const LindbladModel m = driven_oscillator(w, 0.0, w, 4, 2.0 * std::numbers::pi * 1e6, 0.2);
  const auto obs = observables_of(m, {"a"});
  const Operator rho0 = thermal_state(m);
  REQUIRE(rho0(1, 1).real() > 0.1 * rho0(0, 0).real());
  const TrajectoryResult tr = integrate(m, rho0, 2e-7, obs);
  CHECK((tr.final_state - rho0).norm() < 1e-10);
  double worst = 0.0;
  for (const auto& v : tr.expectations[0]) worst = std::max(worst, std::abs(v));
  CHECK(worst < 1e-12);
}

TEST_CASE("decaying qubit follows exp(-gamma t)") {
  const double gamma = 0.1;
  const LindbladModel m = decaying_qubit(gamma);
  const std::vector<ObservableSpec> obs{{basis_operator(2, 1, 1), "p1"}};
  const TrajectoryResult tr = integrate(m, basis_operator(2, 1, 1), 40.0, obs);
  REQUIRE(tr.times.size() > 100);
  double worst = 0.0;
  for (std::size_t j = 0; j < tr.times.size(); ++j) {
    worst = std::max(worst, std::abs(tr.expectations[0][j].real() - std::exp(-gamma * tr.times[j])));
  }
  CHECK(worst < 1e-6);
  CHECK(tr.max_trace_drift <= 1e-7);
}

TEST_CASE("samples land on the fixed grid") {
  const LindbladModel m = decaying_qubit(0.1);
  const std::vector<ObservableSpec> obs{{basis_operator(2, 1, 1), "p1"}};
  OracleConfig c;
  c.samples_per_period = 16;
  const double period = 2.0 * std::numbers::pi;
  const TrajectoryResult tr = integrate(m, basis_operator(2, 1, 1), 3.0 * period, obs, c, period);
  REQUIRE(tr.times.size() == 33);
  for (std::size_t j = 0; j < tr.times.size(); ++j) {
    CHECK(tr.times[j] == doctest::Approx(period + j * period / 16.0).epsilon(1e-14));
  }
}

TEST_CASE("driven damped cavity approaches the rotating analytic amplitude") {
  const double kappa = 0.1, zeta = 0.01, wd = 1.03;
  const LindbladModel m = driven_oscillator(1.0, zeta, wd, 6, kappa);
  const auto obs = observables_of(m, {"a"});
  const TrajectoryResult tr = integrate(m, basis_operator(6, 0, 0), 400.0, obs);
  const double expected = oracle::cavity_amplitude(zeta, 1.0 - wd, kappa);
  CHECK(std::abs(tr.expectations[0].back()) == doctest::Approx(expected).epsilon(1e-6));
  CHECK(tr.max_trace_drift <= 1e-7);
  CHECK(tr.min_eigenvalue >= -1e-6);

  // <a> relaxes at kappa / 2, so skip well past the default heuristic.
  OracleConfig c;
  c.transient_skip = 40.0 / kappa;
  const AverageResult avg = long_time_average(m, obs, c);
  CHECK(avg.magnitudes[0] == doctest::Approx(expected).epsilon(1e-6));
  CHECK(avg.window == doctest::Approx(100.0 * 2.0 * std::numbers::pi / wd));
  CHECK(default_transient_skip(m) == doctest::Approx(10.0 / kappa));
}

TEST_CASE("undriven long-time average of a is zero") {
  const LindbladModel m = driven_oscillator(1.0, 0.0, 1.0, 4, 0.1);
  const auto obs = observables_of(m, {"a"});
  CHECK(long_time_average(m, obs).magnitudes[0] == 0.0);
}

TEST_CASE("initial-state cross-check agrees on a unique steady state") {
  const LindbladModel m = driven_oscillator(1.0, 0.01, 1.02, 5, 0.2);
  OracleConfig c;
  c.cross_check_initial_states = true;
  c.transient_skip = 300.0;
  const AverageResult avg = long_time_average(m, observables_of(m, {"a"}), c);
  REQUIRE(avg.alternate_magnitudes.size() == 1);
  CHECK(avg.initial_state_deviation < 1e-6);
}

TEST_CASE("a drifting observable raises NotStationaryError") {
  const LindbladModel m = driven_oscillator(1.0, 0.01, 1.0, 5, 0.002);
  OracleConfig c;
  c.transient_skip = 0.0;
  CHECK_THROWS_AS(long_time_average(m, observables_of(m, {"a"}), c), NotStationaryError);
}

TEST_CASE("step-size underflow raises StiffnessError") {
  const LindbladModel m = decaying_qubit(0.1);
  const std::vector<ObservableSpec> obs{{basis_operator(2, 1, 1), "p1"}};
  OracleConfig c;
  c.rtol = 1e-300;
  c.atol = 1e-300;
  CHECK_THROWS_AS(integrate(m, basis_operator(2, 1, 1), 10.0, obs, c), StiffnessError);
}

TEST_CASE("exceeding max_steps raises StiffnessError") {
  const LindbladModel m = decaying_qubit(0.1);
  OracleConfig c;
  c.max_steps = 10;
  CHECK_THROWS_AS(integrate(m, basis_operator(2, 1, 1), 1000.0, {}, c), StiffnessError);
}

TEST_CASE("configuration checks") {
  const LindbladModel m = decaying_qubit(0.1);
  OracleConfig c;
  c.average_periods = 50;
  CHECK_THROWS_AS(long_time_average(m, {}, c), ConfigError);
  CHECK_THROWS_AS(integrate(m, Operator::Identity(3, 3), 1.0, {}), DimensionMismatchError);
  LindbladModel closed;
  closed.energies = {0.0, 1.0};
  closed.drive_frequency = 1.0;
  CHECK_THROWS_AS(default_transient_skip(closed), ModelError);
}

TEST_CASE("trajectory CSV") {
  const LindbladModel m = decaying_qubit(0.1);
  const std::vector<ObservableSpec> obs{{basis_operator(2, 1, 1), "p1"}};
  OracleConfig c;
  c.samples_per_period = 4;
  const TrajectoryResult tr = integrate(m, basis_operator(2, 1, 1), 2.0 * std::numbers::pi, obs, c);
  std::ostringstream os;
  write_trajectory_csv(os, tr);
  const std::string s = os.str();
  CHECK(s.rfind("time,re_p1,im_p1\n", 0) == 0);
  CHECK(std::count(s.begin(), s.end(), '\n') == 6);
  CHECK(s.find("0.0000000000000000e+00,1.0000000000000000e+00,0.0000000000000000e+00\n") != std::string::npos);
}
