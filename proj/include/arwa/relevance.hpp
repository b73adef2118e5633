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

#include <span>
#include <vector>

#include "arwa/model.hpp"
#include "arwa/operator_algebra.hpp"

namespace arwa {

struct RankedTerm {
  int n = 0;
  int m = 0;
  double relevance = 0.0;

  bool operator==(const RankedTerm&) const = default;
};

/// Drive terms in descending relevance; ties ordered by (n, m).
struct Ranking {
  std::vector<RankedTerm> terms;
  int iteration = 0;
};

/// First-order relevance against the thermal state:
/// sqrt(2) |V_nm| |p_m - p_n| / |w_mn - w_d + i (Gamma_n + Gamma_m) / 2|.
double bootstrap_relevance(const LindbladModel& model, const DriveTerm& term, std::span<const double> populations,
                           std::span<const double> rates);

std::vector<double> bootstrap_relevances(const LindbladModel& model);

/// Right-hand side of the shifted first-order equation for one drive term: -s * (-i [V_nm |n><m|, rho_s])
/// with s = -1 for a term already in h and s = +1 otherwise.
Operator perturbation_rhs(const DriveTerm& term, DriveStatus status, const Operator& rho_s);

/// sqrt(2) * ||rho_k||_F where (L0 - i k w_d) rho_k = rhs for the term's k_shift and status.
double iterative_relevance(const LindbladModel& model, const Superoperator& L0, const Operator& rho_s,
                           const DriveTerm& term, const SolverOptions& options = {});

/// Reference kernel: one independent factorization per term.
std::vector<double> iterative_relevances_serial(const LindbladModel& model, const Superoperator& L0,
                                                const Operator& rho_s, std::span<const DriveTerm> terms,
                                                const SolverOptions& options = {});

/// OpenMP kernel: one factorization per distinct shift, terms solved concurrently.
std::vector<double> iterative_relevances_parallel(const LindbladModel& model, const Superoperator& L0,
                                                  const Operator& rho_s, std::span<const DriveTerm> terms,
                                                  const SolverOptions& options = {});

/// Drops relevances at or below rel_floor * max, sorts descending with (n, m) tie-break.
Ranking rank(std::span<const DriveTerm> terms, std::span<const double> relevances, double rel_floor = 1e-14,
             int iteration = 0);

}  // namespace arwa
