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

// Builders for the standard driven systems: a damped oscillator, transmon and fluxonium
// qubits coupled to a resonator, and a three-level system with a drive cycle.

#pragma once

#include <array>
#include <cstdint>
#include <vector>

#include "arwa/model.hpp"

namespace arwa {

/// H = w_r a^+a driven by zeta (a e^{i w_d t} + h.c.), decay sqrt(kappa) a plus thermal
/// excitation a^+ at kappa exp(-beta w_r). `levels` is the Fock-space dimension.
LindbladModel driven_oscillator(double omega_r, double zeta, double omega_d, int levels, double kappa,
                                double temperature = 0.0);

/// Eigen-decomposition of a coupled Hamiltonian in the product basis, ascending energies, with
/// degenerate states ordered by their dominant product-basis index and phases fixed so the
/// dominant component is real and positive.
struct DressedBasis {
  std::vector<double> energies;
  /// Columns are the kept dressed states in the product basis.
  Eigen::MatrixXcd vectors;
};

DressedBasis diagonalize_dressed(const Operator& product_hamiltonian, int keep);

/// Product basis index for |photon n, qubit j> is n * qubit_levels + j.
struct TransmonResonatorParams {
  double omega_r = 0.0;
  std::vector<double> qubit_energies;
  /// g_j couples |j> <-> |j+1> via a |j+1><j| + h.c.
  std::vector<double> couplings;
  double zeta = 0.0;
  double omega_d = 0.0;
  int photon_levels = 6;
  /// Number of dressed states kept; 0 keeps all.
  int keep = 0;
  double kappa = 0.0;
  double qubit_decay = 0.0;
  double temperature = 0.0;
};

LindbladModel transmon_resonator(const TransmonResonatorParams& p);

struct FluxoniumResonatorParams {
  std::vector<double> qubit_energies;
  /// Hermitian charge matrix <j|N|j'>.
  Eigen::MatrixXcd charge_matrix;
  double omega_r = 0.0;
  double g = 0.0;
  double zeta = 0.0;
  double omega_d = 0.0;
  int photon_levels = 6;
  int keep = 0;
  double kappa = 0.0;
  double qubit_decay = 0.0;
  double temperature = 0.0;
  /// Keep only the coupling terms that conserve total excitation number.
  bool excitation_conserving = false;
};

LindbladModel fluxonium_resonator(const FluxoniumResonatorParams& p);

struct ThreeLevelParams {
  std::array<double, 3> energies{};
  Complex v01{};
  Complex v02{};
  Complex v12{};
  double gamma10 = 0.0;
  double gamma21 = 0.0;
  double gamma20 = 0.0;
  double dephasing = 0.0;
  double temperature = 0.0;
  double omega_d = 0.0;
};

LindbladModel three_level(const ThreeLevelParams& p);

/// Randomized benchmark model in units of the drive frequency (w_d = 1): levels spaced near 1 with
/// random detunings, nearest-neighbour plus random longer-range drives, cascade decay at ~1e-3
/// and one metastable transition (1 -> 0) at `slow_rate`.
LindbladModel synthetic_metastable(int dim, std::uint64_t seed, double slow_rate = 1e-6);

/// Secular decay channels |i><j| (E_i < E_j) with rate sum_k rate_k |<i|X_k|j>|^2, plus
/// detailed-balance partners when T > 0. The X_k are given in the dressed basis.
void add_dressed_channels(LindbladModel& model, const std::vector<std::pair<Operator, double>>& couplings,
                          double rel_floor = 1e-12);

}  // namespace arwa
