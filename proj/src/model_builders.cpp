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

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>

#include <Eigen/Eigenvalues>

#include "arwa/errors.hpp"
#include "arwa/systems.hpp"

namespace arwa {

namespace {

Operator lowering(int levels) {
  Operator a = Operator::Zero(levels, levels);
  for (int n = 1; n < levels; ++n) a(n - 1, n) = std::sqrt(static_cast<double>(n));
  return a;
}

Operator kron(const Operator& a, const Operator& b) {
  Operator out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i) {
    for (Eigen::Index j = 0; j < a.cols(); ++j) out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
  }
  return out;
}

// Upper-triangular part of the dressed drive zeta*a becomes the lowering drive V.
void add_upper_drives(LindbladModel& model, const Operator& v_full) {
  for (int m = 0; m < model.dim(); ++m) {
    for (int n = 0; n < m; ++n) {
      if (v_full(n, m) != 0.0) model.drives.push_back({n, m, v_full(n, m)});
    }
  }
  drop_small_drives(model);
}

struct CoupledSpec {
  Operator h_product;
  Operator a_product;
  Operator qubit_lowering;
  int keep;
  double zeta, omega_d, kappa, qubit_decay, temperature;
};

LindbladModel build_coupled(const CoupledSpec& s) {
  const auto full = static_cast<int>(s.h_product.rows());
  const int keep = s.keep > 0 ? std::min(s.keep, full) : full;
  const DressedBasis basis = diagonalize_dressed(s.h_product, keep);
  const Operator& u = basis.vectors;

  LindbladModel model;
  model.energies = basis.energies;
  model.drive_frequency = s.omega_d;
  model.temperature = s.temperature;

  const Operator a = u.adjoint() * s.a_product * u;
  add_upper_drives(model, s.zeta * a);

  std::vector<std::pair<Operator, double>> couplings;
  if (s.kappa > 0.0) couplings.emplace_back(a, s.kappa);
  if (s.qubit_decay > 0.0) couplings.emplace_back(u.adjoint() * s.qubit_lowering * u, s.qubit_decay);
  add_dressed_channels(model, couplings);

  model.observables.push_back({a, "a"});
  model.observables.push_back({model.drive_operator(), "V"});
  return model;
}

}  // namespace

LindbladModel driven_oscillator(double omega_r, double zeta, double omega_d, int levels, double kappa,
                                double temperature) {
  if (levels < 2) throw ModelError("oscillator needs at least 2 levels");
  LindbladModel model;
  model.drive_frequency = omega_d;
  model.temperature = temperature;
  for (int n = 0; n < levels; ++n) model.energies.push_back(n * omega_r);
  const Operator a = lowering(levels);
  if (zeta != 0.0) {
    for (int n = 1; n < levels; ++n) model.drives.push_back({n - 1, n, zeta * std::sqrt(static_cast<double>(n))});
  }
  if (kappa > 0.0) {
    model.channels.push_back({a, kappa, omega_r});
    if (temperature > 0.0) {
      const double up = kappa * std::exp(-inverse_temperature(temperature) * omega_r);
      if (up > 0.0) model.channels.push_back({Operator(a.adjoint()), up, -omega_r});
    }
  }
  model.observables.push_back({a, "a"});
  model.observables.push_back({model.drive_operator(), "V"});
  return model;
}

DressedBasis diagonalize_dressed(const Operator& product_hamiltonian, int keep) {
  const auto n = product_hamiltonian.rows();
  if (keep <= 0 || keep > n) throw ModelError("dressed truncation out of range");
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(product_hamiltonian);
  if (es.info() != Eigen::Success) throw ModelError("diagonalization of coupled Hamiltonian did not converge");
  const Eigen::VectorXd& evals = es.eigenvalues();
  Eigen::MatrixXcd vecs = es.eigenvectors();

  std::vector<Eigen::Index> dominant(n);
  for (Eigen::Index k = 0; k < n; ++k) {
    vecs.col(k).cwiseAbs2().maxCoeff(&dominant[k]);
    const Complex c = vecs(dominant[k], k);
    vecs.col(k) *= std::abs(c) / c;
  }

  const double scale = std::max(1.0, evals.cwiseAbs().maxCoeff());
  std::vector<Eigen::Index> order(n);
  std::iota(order.begin(), order.end(), 0);
  // Already ascending; reorder only inside blocks of degenerate eigenvalues.
  for (Eigen::Index start = 0; start < n;) {
    Eigen::Index end = start + 1;
    while (end < n && evals(end) - evals(end - 1) <= 1e-9 * scale) ++end;
    std::sort(order.begin() + start, order.begin() + end,
              [&](Eigen::Index x, Eigen::Index y) { return dominant[x] < dominant[y]; });
    start = end;
  }

  DressedBasis out;
  out.vectors.resize(n, keep);
  for (int k = 0; k < keep; ++k) {
    out.energies.push_back(evals(order[k]));
    out.vectors.col(k) = vecs.col(order[k]);
  }
  return out;
}

LindbladModel transmon_resonator(const TransmonResonatorParams& p) {
  const int nq = static_cast<int>(p.qubit_energies.size());
  if (nq < 2) throw ModelError("transmon needs at least two levels");
  if (static_cast<int>(p.couplings.size()) < nq - 1) throw ModelError("transmon needs one coupling per adjacent pair");
  if (p.photon_levels < 2) throw ModelError("resonator needs at least two levels");

  const Operator a = lowering(p.photon_levels);
  const Operator id_r = Operator::Identity(p.photon_levels, p.photon_levels);
  const Operator id_q = Operator::Identity(nq, nq);
  Operator hq = Operator::Zero(nq, nq);
  Operator raise_q = Operator::Zero(nq, nq);  // sum_j g_j |j+1><j|
  Operator b = Operator::Zero(nq, nq);
  for (int j = 0; j < nq; ++j) hq(j, j) = p.qubit_energies[j];
  for (int j = 0; j + 1 < nq; ++j) {
    raise_q(j + 1, j) = p.couplings[j];
    b(j, j + 1) = std::sqrt(static_cast<double>(j + 1));
  }

  const Operator coupling = kron(a, raise_q);
  CoupledSpec s;
  s.h_product = p.omega_r * kron(a.adjoint() * a, id_q) + kron(id_r, hq) + coupling + coupling.adjoint();
  s.a_product = kron(a, id_q);
  s.qubit_lowering = kron(id_r, b);
  s.keep = p.keep;
  s.zeta = p.zeta;
  s.omega_d = p.omega_d;
  s.kappa = p.kappa;
  s.qubit_decay = p.qubit_decay;
  s.temperature = p.temperature;
  return build_coupled(s);
}

LindbladModel fluxonium_resonator(const FluxoniumResonatorParams& p) {
  const int nq = static_cast<int>(p.qubit_energies.size());
  if (nq < 2) throw ModelError("fluxonium needs at least two levels");
  if (p.charge_matrix.rows() != nq || p.charge_matrix.cols() != nq) throw ModelError("charge matrix dimension mismatch");
  if (!is_hermitian(p.charge_matrix, 1e-12)) throw ModelError("charge matrix must be Hermitian");
  if (p.photon_levels < 2) throw ModelError("resonator needs at least two levels");

  const Operator a = lowering(p.photon_levels);
  const Operator id_r = Operator::Identity(p.photon_levels, p.photon_levels);
  const Operator id_q = Operator::Identity(nq, nq);
  Operator hq = Operator::Zero(nq, nq);
  for (int j = 0; j < nq; ++j) hq(j, j) = p.qubit_energies[j];

  Operator coupling;
  if (p.excitation_conserving) {
    const Operator raise_q = p.charge_matrix.triangularView<Eigen::StrictlyLower>();
    coupling = p.g * kron(a, raise_q);
    coupling += coupling.adjoint().eval();
  } else {
    coupling = p.g * kron(a + a.adjoint(), p.charge_matrix);
  }
  // Qubit relaxation through the charge operator's energy-lowering part.
  const Operator n_lower = p.charge_matrix.triangularView<Eigen::StrictlyUpper>();

  CoupledSpec s;
  s.h_product = p.omega_r * kron(a.adjoint() * a, id_q) + kron(id_r, hq) + coupling;
  s.a_product = kron(a, id_q);
  s.qubit_lowering = kron(id_r, n_lower);
  s.keep = p.keep;
  s.zeta = p.zeta;
  s.omega_d = p.omega_d;
  s.kappa = p.kappa;
  s.qubit_decay = p.qubit_decay;
  s.temperature = p.temperature;
  return build_coupled(s);
}

LindbladModel three_level(const ThreeLevelParams& p) {
  LindbladModel model;
  model.energies.assign(p.energies.begin(), p.energies.end());
  model.drive_frequency = p.omega_d;
  model.temperature = p.temperature;
  if (p.v01 != 0.0) model.drives.push_back({0, 1, p.v01});
  if (p.v02 != 0.0) model.drives.push_back({0, 2, p.v02});
  if (p.v12 != 0.0) model.drives.push_back({1, 2, p.v12});
  if (p.gamma10 > 0.0) add_transition(model, 0, 1, p.gamma10);
  if (p.gamma21 > 0.0) add_transition(model, 1, 2, p.gamma21);
  if (p.gamma20 > 0.0) add_transition(model, 0, 2, p.gamma20);
  if (p.dephasing > 0.0) {
    add_dephasing(model, 1, p.dephasing);
    add_dephasing(model, 2, p.dephasing);
  }
  model.observables.push_back({model.drive_operator(), "V"});
  return model;
}

LindbladModel synthetic_metastable(int dim, std::uint64_t seed, double slow_rate) {
  if (dim < 3) throw ModelError("synthetic model needs at least 3 levels");
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  LindbladModel model;
  model.drive_frequency = 1.0;
  double e = 0.0;
  for (int n = 0; n < dim; ++n) {
    model.energies.push_back(e);
    e += 1.0 + 0.1 * (unit(rng) - 0.5);
  }
  for (int n = 0; n + 1 < dim; ++n) model.drives.push_back({n, n + 1, Complex(0.01 * (0.5 + unit(rng)), 0.0)});
  for (int k = 0; k < dim; ++k) {
    const int n = static_cast<int>(unit(rng) * (dim - 2));
    const int m = std::min(dim - 1, n + 2 + static_cast<int>(unit(rng) * 3));
    const bool dup = std::any_of(model.drives.begin(), model.drives.end(),
                                 [&](const DriveTerm& t) { return t.n == n && t.m == m; });
    if (!dup) model.drives.push_back({n, m, Complex(0.003 * unit(rng), 0.003 * (unit(rng) - 0.5))});
  }
  add_transition(model, 0, 1, slow_rate);
  for (int n = 2; n < dim; ++n) add_transition(model, n - 1, n, 1e-3 * (0.5 + unit(rng)));
  add_dephasing(model, dim - 1, 1e-3);
  model.observables.push_back({model.drive_operator(), "V"});
  return model;
}

void add_dressed_channels(LindbladModel& model, const std::vector<std::pair<Operator, double>>& couplings,
                          double rel_floor) {
  const int d = model.dim();
  Eigen::MatrixXd rates = Eigen::MatrixXd::Zero(d, d);
  for (const auto& [x, rate] : couplings) rates += rate * x.cwiseAbs2();
  const double span = d > 1 ? model.energies.back() - model.energies.front() : 0.0;
  const double floor = rel_floor * rates.maxCoeff();
  for (int j = 0; j < d; ++j) {
    for (int i = 0; i < j; ++i) {
      if (model.energies[j] - model.energies[i] <= 1e-12 * span) continue;
      if (rates(i, j) > floor && rates(i, j) > 0.0) add_transition(model, i, j, rates(i, j));
    }
  }
}

}  // namespace arwa
