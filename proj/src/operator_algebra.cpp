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

#include "arwa/operator_algebra.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>
#include <vector>

#include <Eigen/IterativeLinearSolvers>
#include <Eigen/SVD>
#include <Eigen/SparseLU>

#include "arwa/errors.hpp"

namespace arwa {

namespace {

using Triplet = Eigen::Triplet<Complex>;
using Index = Eigen::Index;
using LU = Eigen::SparseLU<Superoperator, Eigen::COLAMDOrdering<int>>;
using LSCG = Eigen::LeastSquaresConjugateGradient<Superoperator>;

constexpr Complex kI{0.0, 1.0};

Index hilbert_dim(Index super_dim) {
  const auto d = static_cast<Index>(std::llround(std::sqrt(static_cast<double>(super_dim))));
  if (d * d != super_dim) {
    throw DimensionMismatchError("superoperator dimension " + std::to_string(super_dim) +
                                 " is not a perfect square");
  }
  return d;
}

struct Entry {
  Index row;
  Index col;
  Complex value;
};

std::vector<Entry> nonzeros(const Operator& op) {
  std::vector<Entry> out;
  for (Index j = 0; j < op.cols(); ++j) {
    for (Index i = 0; i < op.rows(); ++i) {
      if (op(i, j) != 0.0) out.push_back({i, j, op(i, j)});
    }
  }
  return out;
}

void add_commutator(std::vector<Triplet>& t, const Operator& h, Complex scale) {
  const Index d = h.rows();
  for (const auto& e : nonzeros(h)) {
    // h rho: (I (x) h)
    for (Index j = 0; j < d; ++j) t.emplace_back(e.row + j * d, e.col + j * d, -kI * scale * e.value);
    // rho h: (h^T (x) I), entry h(k, j) couples rho(i, k) -> out(i, j)
    for (Index i = 0; i < d; ++i) t.emplace_back(i + e.col * d, i + e.row * d, kI * scale * e.value);
  }
}

void add_dissipator(std::vector<Triplet>& t, const Operator& A, double rate) {
  const Index d = A.rows();
  const auto entries = nonzeros(A);
  // A rho A^+ : (conj(A) (x) A)
  for (const auto& a : entries) {
    for (const auto& b : entries) {
      t.emplace_back(a.row + b.row * d, a.col + b.col * d, rate * a.value * std::conj(b.value));
    }
  }
  const Operator m = A.adjoint() * A;
  for (const auto& e : nonzeros(m)) {
    const Complex v = -0.5 * rate * e.value;
    for (Index j = 0; j < d; ++j) t.emplace_back(e.row + j * d, e.col + j * d, v);
    for (Index i = 0; i < d; ++i) t.emplace_back(i + e.col * d, i + e.row * d, v);
  }
}

Superoperator from_triplets(Index n, const std::vector<Triplet>& t) {
  Superoperator s(n, n);
  s.setFromTriplets(t.begin(), t.end());
  s.prune([](Index, Index, const Complex& v) { return v != 0.0; });
  s.makeCompressed();
  return s;
}

// Trace row: sum_i x[i + i*D].
void add_trace_row(std::vector<Triplet>& t, Index row, Index d) {
  for (Index i = 0; i < d; ++i) t.emplace_back(row, i + i * d, 1.0);
}

Operator normalize_density(Operator rho) {
  rho = 0.5 * (rho + rho.adjoint()).eval();
  const Complex tr = rho.trace();
  if (std::abs(tr) == 0.0 || !std::isfinite(std::abs(tr))) {
    throw SolverFailureError("steady state has vanishing trace", std::abs(tr));
  }
  return rho / tr.real();
}

double relative_residual(const Superoperator& m, const ComplexVector& x, const ComplexVector& b) {
  const double bn = b.norm();
  const double r = (m * x - b).norm();
  return bn > 0.0 ? r / bn : r;
}

Operator steady_state_from_svd(const Superoperator& L, const SolverOptions& options) {
  const Index n = L.rows();
  const Index d = hilbert_dim(n);
  if (d > options.dense_fallback_max_dim) {
    throw SolverFailureError("steady-state system is ill-conditioned and too large for the dense fallback",
                             std::numeric_limits<double>::infinity());
  }
  const Eigen::MatrixXcd dense(L);
  Eigen::BDCSVD<Eigen::MatrixXcd> svd(dense, Eigen::ComputeFullV);
  const auto& s = svd.singularValues();
  const double smallest = s(n - 1);
  const double second = n > 1 ? s(n - 2) : s(0);
  const double threshold = options.singular_threshold * std::max(s(0), 1e-300);
  if (n > 1 && second <= threshold) {
    throw NonUniqueSteadyStateError("Liouvillian nullspace has dimension > 1", smallest, second);
  }
  if (smallest > threshold) {
    throw NonUniqueSteadyStateError("Liouvillian has no nullspace", smallest, second);
  }
  return normalize_density(devectorize(svd.matrixV().col(n - 1)));
}

// Lower bound on ||A^-1||_2 by a few steps of inverse iteration.
double inverse_norm_estimate(const LU& lu, Index n) {
  ComplexVector z(n);
  for (Index i = 0; i < n; ++i) z(i) = Complex(1.0 + 0.37 * std::sin(1.3 * i), 0.21 * std::cos(0.7 * i));
  z.normalize();
  double est = 0.0;
  for (int it = 0; it < 3; ++it) {
    ComplexVector y = lu.solve(z);
    const double ny = y.norm();
    if (!std::isfinite(ny)) return std::numeric_limits<double>::infinity();
    est = std::max(est, ny);
    if (ny == 0.0) break;
    z = y / ny;
  }
  return est;
}

}  // namespace

Operator basis_operator(Index dim, Index n, Index m) {
  Operator op = Operator::Zero(dim, dim);
  op(n, m) = 1.0;
  return op;
}

bool is_hermitian(const Operator& op, double tol) {
  return op.rows() == op.cols() && (op - op.adjoint()).cwiseAbs().maxCoeff() <= tol;
}

ComplexVector vectorize(const Operator& op) {
  return Eigen::Map<const ComplexVector>(op.data(), op.size());
}

Operator devectorize(const ComplexVector& v) {
  const Index d = hilbert_dim(v.size());
  return Eigen::Map<const Operator>(v.data(), d, d);
}

double frobenius_norm(const Operator& op) { return op.norm(); }

Superoperator commutator_superop(const Operator& h) {
  std::vector<Triplet> t;
  add_commutator(t, h, 1.0);
  return from_triplets(h.size(), t);
}

Superoperator dissipator_superop(const Operator& A, double rate) {
  if (!(rate > 0.0)) throw InvalidRateError("dissipation rate must be positive, got " + std::to_string(rate));
  std::vector<Triplet> t;
  add_dissipator(t, A, rate);
  return from_triplets(A.size(), t);
}

Superoperator liouvillian(const Operator& h, std::span<const CollapseChannel> channels) {
  if (h.rows() != h.cols()) throw DimensionMismatchError("Hamiltonian is not square");
  std::vector<Triplet> t;
  add_commutator(t, h, 1.0);
  for (const auto& c : channels) {
    if (c.op.rows() != h.rows() || c.op.cols() != h.cols()) {
      throw DimensionMismatchError("collapse operator dimension does not match Hamiltonian");
    }
    if (!(c.rate > 0.0)) throw InvalidRateError("dissipation rate must be positive");
    add_dissipator(t, c.op, c.rate);
  }
  return from_triplets(h.size(), t);
}

Operator apply(const Superoperator& L, const Operator& rho) {
  if (L.cols() != rho.size()) throw DimensionMismatchError("superoperator/operator dimension mismatch");
  return devectorize(L * vectorize(rho));
}

Operator solve_steady_state(const Superoperator& L, const SolverOptions& options) {
  if (L.rows() != L.cols()) throw DimensionMismatchError("Liouvillian is not square");
  const Index n = L.rows();
  const Index d = hilbert_dim(n);

  // Replace the equation for d(rho_00)/dt with Tr(rho) = 1; the diagonal rows of a
  // trace-preserving generator are linearly dependent.
  std::vector<Triplet> t;
  t.reserve(L.nonZeros() + d);
  for (Index k = 0; k < L.outerSize(); ++k) {
    for (Superoperator::InnerIterator it(L, k); it; ++it) {
      if (it.row() != 0) t.emplace_back(it.row(), it.col(), it.value());
    }
  }
  add_trace_row(t, 0, d);
  Superoperator a(n, n);
  a.setFromTriplets(t.begin(), t.end());
  a.makeCompressed();

  LU lu;
  lu.analyzePattern(a);
  lu.factorize(a);
  if (lu.info() == Eigen::Success) {
    ComplexVector rhs = ComplexVector::Zero(n);
    rhs(0) = 1.0;
    const ComplexVector x = lu.solve(rhs);
    const double cond = a.norm() * inverse_norm_estimate(lu, n);
    if (x.allFinite() && cond <= options.condition_limit) return normalize_density(devectorize(x));
  }
  return steady_state_from_svd(L, options);
}

struct ShiftedSolver::Impl {
  Index n = 0;
  Index d = 0;
  double shift = 0.0;
  SolverOptions options;
  Superoperator matrix;
  LU lu;
  std::unique_ptr<LSCG> lscg;
  Operator steady_state;
  bool bordered = false;
};

ShiftedSolver::ShiftedSolver(const Superoperator& L0, double shift, const SolverOptions& options,
                             const Operator* steady_state)
    : impl_(std::make_unique<Impl>()) {
  if (L0.rows() != L0.cols()) throw DimensionMismatchError("Liouvillian is not square");
  auto& s = *impl_;
  s.n = L0.rows();
  s.d = hilbert_dim(s.n);
  s.shift = shift;
  s.options = options;

  if (shift != 0.0) {
    Superoperator id(s.n, s.n);
    id.setIdentity();
    s.matrix = L0 - Complex(0.0, shift) * id;
    s.matrix.makeCompressed();
    s.lu.analyzePattern(s.matrix);
    s.lu.factorize(s.matrix);
    if (s.lu.info() != Eigen::Success) {
      throw SolverFailureError("factorization of shifted Liouvillian failed: " + s.lu.lastErrorMessage(),
                               std::numeric_limits<double>::infinity());
    }
    return;
  }

  if (options.zero_shift == ZeroShiftMethod::kBorderedLU) {
    // [L0 vec(I); vec(I)^T 0]: the border column absorbs the component of the rhs outside
    // range(L0) and the border row pins Tr(x) = 0.
    std::vector<Triplet> t;
    t.reserve(L0.nonZeros() + 2 * s.d);
    for (Index k = 0; k < L0.outerSize(); ++k) {
      for (Superoperator::InnerIterator it(L0, k); it; ++it) t.emplace_back(it.row(), it.col(), it.value());
    }
    for (Index i = 0; i < s.d; ++i) t.emplace_back(i + i * s.d, s.n, 1.0);
    add_trace_row(t, s.n, s.d);
    s.matrix.resize(s.n + 1, s.n + 1);
    s.matrix.setFromTriplets(t.begin(), t.end());
    s.matrix.makeCompressed();
    s.lu.analyzePattern(s.matrix);
    s.lu.factorize(s.matrix);
    if (s.lu.info() != Eigen::Success) {
      throw SolverFailureError("factorization of bordered Liouvillian failed: " + s.lu.lastErrorMessage(),
                               std::numeric_limits<double>::infinity());
    }
    s.bordered = true;
    return;
  }

  s.matrix = L0;
  s.matrix.makeCompressed();
  s.steady_state = steady_state ? *steady_state : solve_steady_state(L0, options);
  s.lscg = std::make_unique<LSCG>();
  s.lscg->setMaxIterations(options.least_squares_max_iterations);
  s.lscg->setTolerance(options.least_squares_tolerance);
  s.lscg->compute(s.matrix);
}

ShiftedSolver::~ShiftedSolver() = default;
ShiftedSolver::ShiftedSolver(ShiftedSolver&&) noexcept = default;
ShiftedSolver& ShiftedSolver::operator=(ShiftedSolver&&) noexcept = default;

double ShiftedSolver::shift() const { return impl_->shift; }

Operator ShiftedSolver::solve(const Operator& rhs) const {
  const auto& s = *impl_;
  if (rhs.rows() != s.d || rhs.cols() != s.d) throw DimensionMismatchError("rhs dimension mismatch");
  const ComplexVector b = vectorize(rhs);
  if (b.isZero(0.0)) return Operator::Zero(s.d, s.d);

  if (s.lscg) {
    const ComplexVector x = s.lscg->solve(b);
    const double res = relative_residual(s.matrix, x, b);
    if (s.lscg->info() != Eigen::Success) {
      throw SolverFailureError("least-squares solve did not converge after " +
                                   std::to_string(s.lscg->iterations()) + " iterations",
                               res);
    }
    Operator out = devectorize(x);
    out -= out.trace() * s.steady_state;
    return out;
  }

  if (s.bordered) {
    ComplexVector bb(s.n + 1);
    bb.head(s.n) = b;
    bb(s.n) = 0.0;
    const ComplexVector x = s.lu.solve(bb);
    const double res = relative_residual(s.matrix, x, bb);
    if (!x.allFinite() || res > s.options.residual_limit) {
      throw SolverFailureError("bordered solve produced an inaccurate solution", res);
    }
    return devectorize(x.head(s.n));
  }

  const ComplexVector x = s.lu.solve(b);
  const double res = relative_residual(s.matrix, x, b);
  if (!x.allFinite() || res > s.options.residual_limit) {
    throw SolverFailureError("shifted solve produced an inaccurate solution", res);
  }
  return devectorize(x);
}

Operator solve_shifted(const Superoperator& L0, double shift, const Operator& rhs, const SolverOptions& options,
                       const Operator* steady_state) {
  return ShiftedSolver(L0, shift, options, steady_state).solve(rhs);
}

}  // namespace arwa
