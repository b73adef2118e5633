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


#include "arwa/time_oracle.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <numbers>

#include <Eigen/Eigenvalues>
#include <Eigen/SparseCore>

#include "arwa/errors.hpp"
#include "arwa/format.hpp"

namespace arwa {

namespace {

using RowSparse = Eigen::SparseMatrix<Complex, Eigen::RowMajor>;

// d vec(rho)/dt = L0 x + e^{i w t} Lp x + e^{-i w t} Lm x, with Lp = -i[V, .], Lm = -i[V^+, .].
struct LabFrameRhs {
  RowSparse l0;
  RowSparse lp;
  RowSparse lm;
  double omega = 0.0;

  void operator()(double t, const ComplexVector& x, ComplexVector& y) const {
    const Complex ph(std::cos(omega * t), std::sin(omega * t));
    y.noalias() = l0 * x;
    y.noalias() += ph * (lp * x);
    y.noalias() += std::conj(ph) * (lm * x);
  }
};

LabFrameRhs make_rhs(const LindbladModel& model) {
  LabFrameRhs f;
  const Operator v = model.drive_operator();
  f.l0 = liouvillian(model.hamiltonian(), model.channels);
  f.lp = commutator_superop(v);
  f.lm = commutator_superop(v.adjoint());
  f.omega = model.drive_frequency;
  return f;
}

double frequency_scale(const LindbladModel& model) {
  double s = model.drive_frequency;
  if (model.dim() > 1) s = std::max(s, model.energies.back() - model.energies.front());
  for (const auto& c : model.channels) s = std::max(s, c.rate);
  for (const auto& t : model.drives) s = std::max(s, 2.0 * std::abs(t.amplitude));
  return s > 0.0 ? s : 1.0;
}

// Dormand-Prince 5(4) tableau.
constexpr double c2 = 1.0 / 5, c3 = 3.0 / 10, c4 = 4.0 / 5, c5 = 8.0 / 9;
constexpr double a21 = 1.0 / 5;
constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187, a53 = 64448.0 / 6561, a54 = -212.0 / 729;
constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247, a64 = 49.0 / 176,
                 a65 = -5103.0 / 18656;
constexpr double b1 = 35.0 / 384, b3 = 500.0 / 1113, b4 = 125.0 / 192, b5 = -2187.0 / 6784, b6 = 11.0 / 84;
constexpr double e1 = 71.0 / 57600, e3 = -71.0 / 16695, e4 = 71.0 / 1920, e5 = -17253.0 / 339200,
                 e6 = 22.0 / 525, e7 = -1.0 / 40;

}  // namespace

TrajectoryResult integrate(const LindbladModel& model, const Operator& rho0, double t_end,
                           std::span<const ObservableSpec> observables, const OracleConfig& config,
                           double sample_start) {
  model.validate();
  const int d = model.dim();
  if (rho0.rows() != d || rho0.cols() != d) throw DimensionMismatchError("initial state dimension mismatch");
  if (!(t_end >= 0.0)) throw ConfigError("t_end", "must be nonnegative");
  if (config.samples_per_period < 1) throw ConfigError("samples_per_period", "must be at least 1");
  for (const auto& o : observables) {
    if (o.op.rows() != d || o.op.cols() != d) throw DimensionMismatchError("observable '" + o.label + "' dimension");
  }

  const LabFrameRhs rhs = make_rhs(model);
  const double period = 2.0 * std::numbers::pi / model.drive_frequency;
  const double dt_sample = period / config.samples_per_period;

  TrajectoryResult out;
  std::vector<ComplexVector> probes;  // <O> = vec(O^T) . x
  for (const auto& o : observables) {
    out.labels.push_back(o.label);
    probes.push_back(vectorize(o.op.transpose()));
  }
  out.expectations.resize(observables.size());

  ComplexVector x = vectorize(rho0);
  const auto n = x.size();
  std::array<ComplexVector, 7> k;
  for (auto& v : k) v.resize(n);
  ComplexVector y(n), x_new(n), err(n);

  long next_index = sample_start <= 0.0 ? 0 : static_cast<long>(std::ceil(sample_start / dt_sample - 1e-9));
  auto sample_time = [&](long j) { return static_cast<double>(j) * dt_sample; };
  long samples_taken = 0;
  out.min_eigenvalue = std::numeric_limits<double>::infinity();

  auto take_sample = [&](double t) {
    out.times.push_back(t);
    for (std::size_t o = 0; o < probes.size(); ++o) out.expectations[o].push_back(probes[o].transpose() * x);
    Complex tr = 0.0;
    for (int i = 0; i < d; ++i) tr += x[i + i * d];
    out.max_trace_drift = std::max(out.max_trace_drift, std::abs(tr - 1.0));
    if (config.eigenvalue_monitor_interval > 0 && samples_taken % config.eigenvalue_monitor_interval == 0) {
      const Operator rho = devectorize(x);
      const Operator herm = 0.5 * (rho + rho.adjoint());
      Eigen::SelfAdjointEigenSolver<Operator> es(herm, Eigen::EigenvaluesOnly);
      out.min_eigenvalue = std::min(out.min_eigenvalue, es.eigenvalues().minCoeff());
    }
    ++samples_taken;
  };

  double t = 0.0;
  if (next_index == 0 && sample_time(0) <= t_end) {
    take_sample(0.0);
    ++next_index;
  }

  const double scale = frequency_scale(model);
  double h = 0.01 / scale;
  rhs(t, x, k[0]);
  while (t < t_end) {
    if (out.steps + out.rejected_steps >= config.max_steps) {
      throw StiffnessError("integrator exceeded max_steps; the rotating-frame solver is the intended tool here", t, h);
    }
    const double next_sample = sample_time(next_index);
    double stop = t_end;
    if (next_sample > t && next_sample <= t_end) stop = next_sample;
    bool lands = false;
    double step = h;
    if (t + step >= stop) {
      step = stop - t;
      lands = true;
    }
    if (step < 16.0 * std::numeric_limits<double>::epsilon() * std::max(std::abs(t), 1.0 / scale)) {
      throw StiffnessError("step size underflow; the rotating-frame solver avoids this stiffness", t, step);
    }

    y = x + step * a21 * k[0];
    rhs(t + c2 * step, y, k[1]);
    y = x + step * (a31 * k[0] + a32 * k[1]);
    rhs(t + c3 * step, y, k[2]);
    y = x + step * (a41 * k[0] + a42 * k[1] + a43 * k[2]);
    rhs(t + c4 * step, y, k[3]);
    y = x + step * (a51 * k[0] + a52 * k[1] + a53 * k[2] + a54 * k[3]);
    rhs(t + c5 * step, y, k[4]);
    y = x + step * (a61 * k[0] + a62 * k[1] + a63 * k[2] + a64 * k[3] + a65 * k[4]);
    rhs(t + step, y, k[5]);
    x_new = x + step * (b1 * k[0] + b3 * k[2] + b4 * k[3] + b5 * k[4] + b6 * k[5]);
    rhs(t + step, x_new, k[6]);
    err = step * (e1 * k[0] + e3 * k[2] + e4 * k[3] + e5 * k[4] + e6 * k[5] + e7 * k[6]);

    double acc = 0.0;
    for (Eigen::Index i = 0; i < n; ++i) {
      const double sc = config.atol + config.rtol * std::max(std::abs(x[i]), std::abs(x_new[i]));
      const double r = std::abs(err[i]) / sc;
      acc += r * r;
    }
    const double enorm = std::sqrt(acc / static_cast<double>(n));
    const double factor = enorm == 0.0 ? 5.0 : std::clamp(0.9 * std::pow(enorm, -0.2), 0.2, 5.0);

    if (enorm <= 1.0) {
      ++out.steps;
      t = lands ? stop : t + step;
      x.swap(x_new);
      k[0].swap(k[6]);
      if (lands && stop == next_sample) {
        take_sample(t);
        ++next_index;
      }
      // A step shortened to hit the grid says little about the natural step size.
      h = lands ? std::max(h, step * factor) : step * factor;
    } else {
      ++out.rejected_steps;
      h = step * factor;
    }
  }
  if (out.times.empty()) out.min_eigenvalue = 0.0;
  out.final_state = devectorize(x);
  return out;
}

double default_transient_skip(const LindbladModel& model) {
  double gmin = std::numeric_limits<double>::infinity();
  for (double g : total_rates(model)) {
    if (g > 0.0) gmin = std::min(gmin, g);
  }
  if (!std::isfinite(gmin)) throw ModelError("model has no dissipation; the long-time average is undefined");
  return 10.0 * std::max(1.0 / gmin, 1.0 / model.drive_frequency);
}

namespace {

struct WindowStats {
  std::vector<double> whole, first, second;
};

WindowStats window_stats(const TrajectoryResult& tr, std::size_t samples) {
  WindowStats w;
  const std::size_t begin = tr.times.size() - samples;
  const std::size_t half = samples / 2;
  for (const auto& series : tr.expectations) {
    double all = 0.0, a = 0.0, b = 0.0;
    for (std::size_t j = 0; j < samples; ++j) {
      const double v = std::norm(series[begin + j]);
      all += v;
      (j < half ? a : b) += v;
    }
    w.whole.push_back(std::sqrt(all / samples));
    w.first.push_back(std::sqrt(a / half));
    w.second.push_back(std::sqrt(b / (samples - half)));
  }
  return w;
}

Operator alternate_initial_state(const LindbladModel& model) {
  const int d = model.dim();
  if (model.temperature > 0.0) return thermal_state(model);
  return basis_operator(d, d - 1, d - 1);
}

}  // namespace

AverageResult long_time_average(const LindbladModel& model, std::span<const ObservableSpec> observables,
                                const OracleConfig& config, const Operator* rho0) {
  if (config.average_periods < 100) throw ConfigError("average_periods", "must be at least 100");
  if (config.transient_skip && !(*config.transient_skip >= 0.0)) {
    throw ConfigError("transient_skip", "must be nonnegative");
  }
  AverageResult res;
  res.transient_skip = config.transient_skip.value_or(default_transient_skip(model));
  const double period = 2.0 * std::numbers::pi / model.drive_frequency;
  res.window = config.average_periods * period;
  const auto samples = static_cast<std::size_t>(config.average_periods) * config.samples_per_period;
  const double dt_sample = period / config.samples_per_period;
  // Sample grid: samples points starting at the first grid point at or after the skip.
  // Same j * dt arithmetic as integrate() so the last grid point is exactly t_end.
  const auto first_index = static_cast<long>(std::ceil(res.transient_skip / dt_sample - 1e-9));
  const double start = static_cast<double>(first_index) * dt_sample;
  const double t_end = static_cast<double>(first_index + static_cast<long>(samples) - 1) * dt_sample;

  const Operator first_state = rho0 ? *rho0 : thermal_state(model);
  std::vector<Operator> initial{first_state};
  if (config.cross_check_initial_states) {
    Operator alt = alternate_initial_state(model);
    if (rho0 == nullptr && model.temperature > 0.0) alt = basis_operator(model.dim(), 0, 0);
    initial.push_back(alt);
  }

  std::vector<TrajectoryResult> runs(initial.size());
  std::exception_ptr error;
  const auto n_runs = static_cast<long>(initial.size());
#pragma omp parallel for schedule(static)
  for (long r = 0; r < n_runs; ++r) {
    try {
      runs[r] = integrate(model, initial[r], t_end, observables, config, start);
    } catch (...) {
#pragma omp critical(arwa_oracle_error)
      if (!error) error = std::current_exception();
    }
  }
  if (error) std::rethrow_exception(error);

  for (const auto& run : runs) {
    if (run.times.size() < samples) throw SolverFailureError("sampling grid shorter than the averaging window", 0.0);
  }
  const WindowStats w = window_stats(runs[0], samples);
  res.labels = runs[0].labels;
  res.magnitudes = w.whole;
  res.first_half = w.first;
  res.second_half = w.second;
  for (std::size_t o = 0; o < w.whole.size(); ++o) {
    const double gap = std::abs(w.first[o] - w.second[o]);
    if (gap > config.stationarity_tolerance * std::max(w.first[o], w.second[o]) + config.stationarity_floor) {
      throw NotStationaryError("observable '" + res.labels[o] + "' still drifting: halves " +
                                   format_double(w.first[o]) + " vs " + format_double(w.second[o]),
                               w.first[o], w.second[o]);
    }
  }
  if (runs.size() > 1) {
    const WindowStats alt = window_stats(runs[1], samples);
    res.alternate_magnitudes = alt.whole;
    for (std::size_t o = 0; o < w.whole.size(); ++o) {
      const double ref = std::max(w.whole[o], alt.whole[o]);
      const double dev = std::abs(w.whole[o] - alt.whole[o]);
      res.initial_state_deviation =
          std::max(res.initial_state_deviation, ref > config.stationarity_floor ? dev / ref : 0.0);
    }
  }
  res.trajectory = std::move(runs[0]);
  return res;
}

void write_trajectory_csv(std::ostream& os, const TrajectoryResult& trajectory) {
  os << "time";
  for (const auto& l : trajectory.labels) os << ",re_" << l << ",im_" << l;
  os << '\n';
  for (std::size_t j = 0; j < trajectory.times.size(); ++j) {
    os << format_double(trajectory.times[j]);
    for (const auto& series : trajectory.expectations) {
      os << ',' << format_double(series[j].real()) << ',' << format_double(series[j].imag());
    }
    os << '\n';
  }
}

}  // namespace arwa
