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

#include "arwa/relevance.hpp"

#include <algorithm>
#include <cmath>
#include <exception>
#include <map>
#include <numbers>
#include <optional>

#include <omp.h>

namespace arwa {

namespace {

double shift_of(const LindbladModel& model, const DriveTerm& term) {
  return static_cast<double>(term.k_shift) * model.drive_frequency;
}

}  // namespace

double bootstrap_relevance(const LindbladModel& model, const DriveTerm& term, std::span<const double> populations,
                           std::span<const double> rates) {
  const double dp = populations[term.m] - populations[term.n];
  if (dp == 0.0 || term.amplitude == 0.0) return 0.0;
  const double w_mn = model.energies[term.m] - model.energies[term.n];
  const Complex denom(w_mn - model.drive_frequency, 0.5 * (rates[term.n] + rates[term.m]));
  return std::numbers::sqrt2 * std::abs(term.amplitude) * std::abs(dp) / std::abs(denom);
}

std::vector<double> bootstrap_relevances(const LindbladModel& model) {
  const auto p = thermal_populations(model);
  const auto g = total_rates(model);
  std::vector<double> out;
  out.reserve(model.drives.size());
  for (const auto& t : model.drives) out.push_back(bootstrap_relevance(model, t, p, g));
  return out;
}

Operator perturbation_rhs(const DriveTerm& term, DriveStatus status, const Operator& rho_s) {
  const Eigen::Index d = rho_s.rows();
  // [X, rho] with X = V |n><m|: row n of X rho is V rho(m, :), column m of rho X is V rho(:, n).
  Operator comm = Operator::Zero(d, d);
  comm.row(term.n) += term.amplitude * rho_s.row(term.m);
  comm.col(term.m) -= term.amplitude * rho_s.col(term.n);
  const Operator l_nm = Complex(0.0, -1.0) * comm;
  const double sign = status == DriveStatus::kIncluded ? -1.0 : 1.0;
  return -sign * l_nm;
}

double iterative_relevance(const LindbladModel& model, const Superoperator& L0, const Operator& rho_s,
                           const DriveTerm& term, const SolverOptions& options) {
  if (term.amplitude == 0.0) return 0.0;
  const Operator rhs = perturbation_rhs(term, term.status, rho_s);
  const Operator rho_k = solve_shifted(L0, shift_of(model, term), rhs, options, &rho_s);
  return std::numbers::sqrt2 * frobenius_norm(rho_k);
}

std::vector<double> iterative_relevances_serial(const LindbladModel& model, const Superoperator& L0,
                                                const Operator& rho_s, std::span<const DriveTerm> terms,
                                                const SolverOptions& options) {
  std::vector<double> out;
  out.reserve(terms.size());
  for (const auto& t : terms) out.push_back(iterative_relevance(model, L0, rho_s, t, options));
  return out;
}

std::vector<double> iterative_relevances_parallel(const LindbladModel& model, const Superoperator& L0,
                                                  const Operator& rho_s, std::span<const DriveTerm> terms,
                                                  const SolverOptions& options) {
  std::vector<int> shifts;
  for (const auto& t : terms) {
    if (t.amplitude != 0.0) shifts.push_back(t.k_shift);
  }
  std::sort(shifts.begin(), shifts.end());
  shifts.erase(std::unique(shifts.begin(), shifts.end()), shifts.end());

  const auto n_shifts = static_cast<long>(shifts.size());
  const auto n_terms = static_cast<long>(terms.size());
  std::vector<std::optional<ShiftedSolver>> solvers(shifts.size());
  std::vector<double> out(terms.size(), 0.0);
  std::exception_ptr error;

#pragma omp parallel for schedule(dynamic)
  for (long s = 0; s < n_shifts; ++s) {
    try {
      solvers[s].emplace(L0, shifts[s] * model.drive_frequency, options, &rho_s);
    } catch (...) {
#pragma omp critical(arwa_relevance_error)
      if (!error) error = std::current_exception();
    }
  }
  if (error) std::rethrow_exception(error);

#pragma omp parallel for schedule(dynamic)
  for (long i = 0; i < n_terms; ++i) {
    const auto& t = terms[i];
    if (t.amplitude == 0.0) continue;
    try {
      const auto pos = std::lower_bound(shifts.begin(), shifts.end(), t.k_shift) - shifts.begin();
      const Operator rho_k = solvers[pos]->solve(perturbation_rhs(t, t.status, rho_s));
      out[i] = std::numbers::sqrt2 * frobenius_norm(rho_k);
    } catch (...) {
#pragma omp critical(arwa_relevance_error)
      if (!error) error = std::current_exception();
    }
  }
  if (error) std::rethrow_exception(error);
  return out;
}

Ranking rank(std::span<const DriveTerm> terms, std::span<const double> relevances, double rel_floor, int iteration) {
  Ranking r;
  r.iteration = iteration;
  double vmax = 0.0;
  for (double v : relevances) vmax = std::max(vmax, v);
  const double floor = rel_floor * vmax;
  for (std::size_t i = 0; i < terms.size(); ++i) {
    if (relevances[i] > floor && relevances[i] > 0.0) r.terms.push_back({terms[i].n, terms[i].m, relevances[i]});
  }
  std::sort(r.terms.begin(), r.terms.end(), [](const RankedTerm& a, const RankedTerm& b) {
    if (a.relevance != b.relevance) return a.relevance > b.relevance;
    if (a.n != b.n) return a.n < b.n;
    return a.m < b.m;
  });
  return r;
}

}  // namespace arwa
