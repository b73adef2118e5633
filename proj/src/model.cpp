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

#include "arwa/model.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "arwa/errors.hpp"

namespace arwa {

Operator LindbladModel::hamiltonian() const {
  Operator h = Operator::Zero(dim(), dim());
  for (int i = 0; i < dim(); ++i) h(i, i) = energies[i];
  return h;
}

Operator LindbladModel::drive_operator() const {
  Operator v = Operator::Zero(dim(), dim());
  for (const auto& d : drives) v(d.n, d.m) += d.amplitude;
  return v;
}

const ObservableSpec* LindbladModel::find_observable(std::string_view label) const {
  for (const auto& o : observables) {
    if (o.label == label) return &o;
  }
  return nullptr;
}

void LindbladModel::validate() const {
  const int d = dim();
  if (d == 0) throw ModelError("model has no states");
  if (!std::is_sorted(energies.begin(), energies.end())) throw ModelError("energies must be ascending");
  if (!(temperature >= 0.0)) throw ModelError("temperature must be nonnegative");
  if (!(drive_frequency > 0.0)) throw ModelError("drive frequency must be positive");
  for (const auto& t : drives) {
    if (t.n < 0 || t.m >= d || !(t.n < t.m)) {
      throw ModelError("drive term (" + std::to_string(t.n) + "," + std::to_string(t.m) +
                       ") must satisfy 0 <= n < m < D");
    }
  }
  const double span = energies.back() - energies.front();
  for (std::size_t k = 0; k < channels.size(); ++k) {
    const auto& c = channels[k];
    if (c.op.rows() != d || c.op.cols() != d) throw ModelError("channel " + std::to_string(k) + " has wrong dimension");
    if (!(c.rate > 0.0)) throw ModelError("channel " + std::to_string(k) + " has non-positive rate");
    for (int j = 0; j < d; ++j) {
      for (int i = 0; i < d; ++i) {
        if (c.op(i, j) == 0.0) continue;
        const double gap = energies[j] - energies[i];
        const double tol = 1e-6 * std::max(std::abs(c.omega), std::abs(gap)) + 1e-12 * span;
        if (std::abs(gap - c.omega) > tol) {
          throw ModelError("channel " + std::to_string(k) + " is not an eigenoperator of H0: entry (" +
                           std::to_string(i) + "," + std::to_string(j) + ") has gap " + std::to_string(gap) +
                           " but label " + std::to_string(c.omega));
        }
      }
    }
  }
  for (const auto& o : observables) {
    if (o.op.rows() != d || o.op.cols() != d) throw ModelError("observable '" + o.label + "' has wrong dimension");
  }
}

double inverse_temperature(double kelvin) {
  if (kelvin <= 0.0) return std::numeric_limits<double>::infinity();
  return kHbar / (kBoltzmann * kelvin);
}

std::vector<double> thermal_populations(const LindbladModel& model) {
  const int d = model.dim();
  std::vector<double> p(d, 0.0);
  if (d == 0) return p;
  if (model.temperature <= 0.0) {
    p[0] = 1.0;
    return p;
  }
  const double beta = inverse_temperature(model.temperature);
  double z = 0.0;
  for (int i = 0; i < d; ++i) {
    p[i] = std::exp(-beta * (model.energies[i] - model.energies[0]));
    z += p[i];
  }
  for (auto& x : p) x /= z;
  return p;
}

Operator thermal_state(const LindbladModel& model) {
  const auto p = thermal_populations(model);
  Operator rho = Operator::Zero(model.dim(), model.dim());
  for (int i = 0; i < model.dim(); ++i) rho(i, i) = p[i];
  return rho;
}

std::vector<double> total_rates(const LindbladModel& model) {
  std::vector<double> gamma(model.dim(), 0.0);
  for (const auto& c : model.channels) {
    const Eigen::VectorXd out = c.op.cwiseAbs2().colwise().sum().transpose();
    for (int n = 0; n < model.dim(); ++n) gamma[n] += c.rate * out(n);
  }
  return gamma;
}

void add_transition(LindbladModel& model, int lower, int upper, double rate, std::optional<double> up_rate) {
  const int d = model.dim();
  if (lower < 0 || upper >= d || !(lower < upper)) throw ModelError("transition needs 0 <= lower < upper < D");
  if (!(rate > 0.0)) throw InvalidRateError("transition rate must be positive");
  const double omega = model.energies[upper] - model.energies[lower];
  model.channels.push_back({basis_operator(d, lower, upper), rate, omega});
  double up = 0.0;
  if (up_rate) {
    up = *up_rate;
  } else if (model.temperature > 0.0) {
    up = rate * std::exp(-inverse_temperature(model.temperature) * omega);
  }
  if (up > 0.0) model.channels.push_back({basis_operator(d, upper, lower), up, -omega});
}

void add_dephasing(LindbladModel& model, int n, double rate) {
  if (!(rate > 0.0)) throw InvalidRateError("dephasing rate must be positive");
  model.channels.push_back({basis_operator(model.dim(), n, n), rate, 0.0});
}

void drop_small_drives(LindbladModel& model, double rel_floor) {
  double vmax = 0.0;
  for (const auto& t : model.drives) vmax = std::max(vmax, std::abs(t.amplitude));
  const double floor = rel_floor * vmax;
  std::erase_if(model.drives, [&](const DriveTerm& t) { return std::abs(t.amplitude) < floor || t.amplitude == 0.0; });
}

}  // namespace arwa
