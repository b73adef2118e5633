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


#include "arwa/sweep.hpp"

#include <cmath>
#include <exception>

#include "arwa/errors.hpp"
#include "arwa/format.hpp"

namespace arwa {

ModelFactory drive_frequency_axis(LindbladModel base) {
  return [base = std::move(base)](double w) {
    LindbladModel m = base;
    m.drive_frequency = w;
    return m;
  };
}

SweepRow sweep_row(const ModelFactory& factory, double value, std::span<const std::string> observables,
                   const SweepConfig& config) {
  SweepRow row;
  row.parameter = value;
  try {
    const LindbladModel model = factory(value);
    std::vector<const ObservableSpec*> specs;
    for (const auto& name : observables) {
      const ObservableSpec* s = model.find_observable(name);
      if (s == nullptr) throw ConfigError("observables", "model has no observable '" + name + "'");
      specs.push_back(s);
    }
    const ArwaResult r = solve(model, config.arwa);
    row.iterations = r.iteration_count();
    row.converged = r.converged;
    row.dashed_count = r.graph.dashed_count();
    for (const auto* s : specs) row.values.push_back(expectation_magnitude(r, *s));
    if (config.compare_oracle) {
      std::vector<ObservableSpec> obs;
      for (const auto* s : specs) obs.push_back(*s);
      row.oracle_values = long_time_average(model, obs, config.oracle).magnitudes;
    }
  } catch (const std::exception& e) {
    row.error = e.what();
  }
  return row;
}

SweepTable sweep(const ModelFactory& factory, std::span<const double> values,
                 std::span<const std::string> observables, const SweepConfig& config) {
  if (values.empty()) throw ConfigError("values", "sweep needs at least one value");
  if (config.workers < 1) throw ConfigError("workers", "must be at least 1");
  SweepTable table;
  table.observables.assign(observables.begin(), observables.end());
  table.has_oracle = config.compare_oracle;
  table.rows.resize(values.size());
  const auto n = static_cast<long>(values.size());
  if (config.workers == 1) {
    for (long i = 0; i < n; ++i) table.rows[i] = sweep_row(factory, values[i], observables, config);
  } else {
    // sweep_row never throws, so no exception can escape the parallel region.
#pragma omp parallel for schedule(dynamic) num_threads(config.workers)
    for (long i = 0; i < n; ++i) table.rows[i] = sweep_row(factory, values[i], observables, config);
  }
  return table;
}

std::vector<double> linspace(double first, double last, int count) {
  if (count < 1) throw ConfigError("linspace", "count must be at least 1");
  if (!std::isfinite(first) || !std::isfinite(last)) throw ConfigError("linspace", "endpoints must be finite");
  if (count == 1) return {first};
  std::vector<double> v(count);
  for (int i = 0; i < count; ++i) v[i] = first + (last - first) * i / (count - 1);
  v.back() = last;
  return v;
}

namespace {

std::string csv_escape(const std::string& s) {
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c == '\n' ? ' ' : c;
  }
  return out + "\"";
}

}  // namespace

void write_sweep_csv(std::ostream& os, const SweepTable& table) {
  os << "parameter";
  for (const auto& o : table.observables) os << ',' << o;
  os << ",iterations,converged,dashed_count";
  if (table.has_oracle) {
    for (const auto& o : table.observables) os << ",oracle_" << o;
  }
  os << ",error\n";
  for (const auto& r : table.rows) {
    os << format_double(r.parameter);
    const bool ok = r.error.empty();
    for (std::size_t o = 0; o < table.observables.size(); ++o) {
      os << ',';
      if (ok) os << format_double(r.values[o]);
    }
    os << ',' << r.iterations << ',' << (r.converged ? "true" : "false") << ',' << r.dashed_count;
    if (table.has_oracle) {
      for (std::size_t o = 0; o < table.observables.size(); ++o) {
        os << ',';
        if (ok && o < r.oracle_values.size()) os << format_double(r.oracle_values[o]);
      }
    }
    os << ',' << (ok ? std::string() : csv_escape(r.error)) << '\n';
  }
}

}  // namespace arwa
