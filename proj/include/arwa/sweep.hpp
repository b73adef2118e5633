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

#include <functional>
#include <optional>
#include <ostream>
#include <span>
#include <string>
#include <vector>

#include "arwa/arwa.hpp"
#include "arwa/time_oracle.hpp"

namespace arwa {

/// Produces the model for one value of the swept parameter.
using ModelFactory = std::function<LindbladModel(double)>;

/// Factory that copies `base` and sets its drive frequency.
ModelFactory drive_frequency_axis(LindbladModel base);

struct SweepConfig {
  ArwaConfig arwa;
  /// Worker threads; 1 runs rows serially on the calling thread.
  int workers = 1;
  bool compare_oracle = false;
  OracleConfig oracle;
};

struct SweepRow {
  double parameter = 0.0;
  /// One entry per requested observable; empty on error.
  std::vector<double> values;
  int iterations = 0;
  bool converged = false;
  int dashed_count = 0;
  std::vector<double> oracle_values;
  std::string error;
};

struct SweepTable {
  std::vector<std::string> observables;
  bool has_oracle = false;
  std::vector<SweepRow> rows;
};

/// One independent solve per value; rows keep input order and record their own errors.
SweepTable sweep(const ModelFactory& factory, std::span<const double> values,
                 std::span<const std::string> observables, const SweepConfig& config = {});

SweepRow sweep_row(const ModelFactory& factory, double value, std::span<const std::string> observables,
                   const SweepConfig& config);

/// count >= 1 points from first to last inclusive.
std::vector<double> linspace(double first, double last, int count);

/// Header: parameter, observables, iterations, converged, dashed_count, oracle_<obs>..., error.
void write_sweep_csv(std::ostream& os, const SweepTable& table);

}  // namespace arwa
