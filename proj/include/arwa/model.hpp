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

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "arwa/operator_algebra.hpp"

namespace arwa {

inline constexpr double kHbar = 1.054571817e-34;      // J s
inline constexpr double kBoltzmann = 1.380649e-23;    // J / K

enum class DriveStatus { kUndecided, kIncluded, kExcluded };

/// One lowering drive term V_nm |n><m| (n < m), rad/s.
struct DriveTerm {
  int n = 0;
  int m = 0;
  Complex amplitude{};
  double relevance = 0.0;
  DriveStatus status = DriveStatus::kUndecided;
  /// k_n - k_m + 1 in the current frame.
  int k_shift = 1;
};

struct ObservableSpec {
  Operator op;
  std::string label;
};

/// Driven open system H(t) = H0 + (V e^{i w_d t} + h.c.) with Lindblad channels, expressed in
/// the eigenbasis of H0. Energies, amplitudes and rates are angular frequencies.
struct LindbladModel {
  std::vector<double> energies;
  std::vector<DriveTerm> drives;
  std::vector<CollapseChannel> channels;
  double temperature = 0.0;  // K
  double drive_frequency = 0.0;
  /// Named observables shipped with the model (e.g. the resonator lowering operator "a").
  std::vector<ObservableSpec> observables;

  int dim() const { return static_cast<int>(energies.size()); }
  Operator hamiltonian() const;
  /// V = sum_{n<m} V_nm |n><m| over all drive terms.
  Operator drive_operator() const;
  const ObservableSpec* find_observable(std::string_view label) const;

  /// Throws ModelError on broken invariants (ordering, n < m, eigenoperator channels, dims).
  void validate() const;
};

/// hbar / (k_B T) in s/rad; +inf at T = 0.
double inverse_temperature(double kelvin);

std::vector<double> thermal_populations(const LindbladModel& model);

/// diag(p_n) with p_n = exp(-beta E_n) / Z.
Operator thermal_state(const LindbladModel& model);

/// Gamma_n = sum_k rate_k (A_k^+ A_k)_nn: total rate out of state n.
std::vector<double> total_rates(const LindbladModel& model);

/// Adds the decay channel |lower><upper|. When `up_rate` is unset and T > 0, the reverse channel
/// gets the detailed-balance rate rate * exp(-beta (E_upper - E_lower)); an explicit up_rate of 0
/// suppresses it.
void add_transition(LindbladModel& model, int lower, int upper, double rate,
                    std::optional<double> up_rate = std::nullopt);

/// Adds pure dephasing |n><n| at the given rate.
void add_dephasing(LindbladModel& model, int n, double rate);

/// Removes drive terms with |V_nm| < rel_floor * max |V|.
void drop_small_drives(LindbladModel& model, double rel_floor = 1e-12);

}  // namespace arwa
