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

#include <complex>
#include <memory>
#include <span>

#include <Eigen/Dense>
#include <Eigen/SparseCore>

namespace arwa {

using Complex = std::complex<double>;

/// Dense D x D operator in the eigenbasis of the undriven Hamiltonian.
using Operator = Eigen::MatrixXcd;
using ComplexVector = Eigen::VectorXcd;

/// D^2 x D^2 sparse superoperator acting on column-stacked operators:
/// vec(X)[i + j*D] = X(i, j).
using Superoperator = Eigen::SparseMatrix<Complex>;

/// A collapse operator A with rate gamma, entering as gamma * D[A].
/// `omega` is the transition label: A only has entries (i, j) with E_j - E_i == omega.
struct CollapseChannel {
  Operator op;
  double rate = 0.0;
  double omega = 0.0;
};

/// |n><m| in dimension dim.
Operator basis_operator(Eigen::Index dim, Eigen::Index n, Eigen::Index m);

bool is_hermitian(const Operator& op, double tol = 1e-12);

ComplexVector vectorize(const Operator& op);
Operator devectorize(const ComplexVector& v);

/// sqrt(sum |x_ij|^2).
double frobenius_norm(const Operator& op);

/// Superoperator of rho -> -i[h, rho].
Superoperator commutator_superop(const Operator& h);

/// Superoperator of rho -> rate * (A rho A^+ - {A^+ A, rho}/2). Throws InvalidRateError for rate <= 0.
Superoperator dissipator_superop(const Operator& A, double rate);

/// L0 rho = -i[h, rho] + sum_k rate_k D[A_k] rho.
Superoperator liouvillian(const Operator& h, std::span<const CollapseChannel> channels);

/// Devectorized L * vec(rho).
Operator apply(const Superoperator& L, const Operator& rho);

enum class ZeroShiftMethod {
  /// Sparse LU on L0 bordered by the trace constraint; yields the traceless solution directly.
  kBorderedLU,
  /// Least-squares CG on L0 followed by projection onto the traceless solution.
  kLeastSquares,
};

struct SolverOptions {
  /// Replaced-row steady-state system is treated as ill-conditioned above this estimate.
  double condition_limit = 1e12;
  /// Singular values below this fraction of the largest count as zero.
  double singular_threshold = 1e-10;
  /// Largest D for which the dense SVD fallback is attempted.
  Eigen::Index dense_fallback_max_dim = 48;
  ZeroShiftMethod zero_shift = ZeroShiftMethod::kBorderedLU;
  int least_squares_max_iterations = 50000;
  double least_squares_tolerance = 1e-13;
  /// Relative residual above which a direct solve is reported as failed.
  double residual_limit = 1e-6;
};

/// Unique rho with L rho = 0 and Tr(rho) = 1, symmetrized to be Hermitian.
/// Throws NonUniqueSteadyStateError when the nullspace is not one-dimensional.
Operator solve_steady_state(const Superoperator& L, const SolverOptions& options = {});

/// Factorized (L0 - i*shift) for repeated solves against different right-hand sides.
/// For shift == 0 the singular system is solved for its traceless (least-squares) solution.
/// solve() is const and may be called concurrently.
class ShiftedSolver {
 public:
  /// `steady_state` is only consulted by the least-squares zero-shift path; when null it is
  /// computed from L0.
  ShiftedSolver(const Superoperator& L0, double shift, const SolverOptions& options = {},
                const Operator* steady_state = nullptr);
  ~ShiftedSolver();
  ShiftedSolver(ShiftedSolver&&) noexcept;
  ShiftedSolver& operator=(ShiftedSolver&&) noexcept;

  Operator solve(const Operator& rhs) const;
  double shift() const;

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

/// One-shot convenience wrapper around ShiftedSolver.
Operator solve_shifted(const Superoperator& L0, double shift, const Operator& rhs,
                       const SolverOptions& options = {}, const Operator* steady_state = nullptr);

}  // namespace arwa
