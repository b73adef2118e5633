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


#include "arwa/cli.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <fstream>
#include <functional>
#include <limits>
#include <set>

#include <spdlog/spdlog.h>

#include "arwa/errors.hpp"
#include "arwa/format.hpp"
#include "arwa/systems.hpp"

namespace arwa::cli {

namespace {

std::string join(const std::string& path, const std::string& key) { return path.empty() ? key : path + "." + key; }

double get_number(const Json& obj, const std::string& key, const std::string& path) {
  const Json& v = obj.at(key);
  if (!v.is_number() || !std::isfinite(v.get<double>())) throw ConfigError(join(path, key), "must be a finite number");
  return v.get<double>();
}

long get_integer(const Json& obj, const std::string& key, const std::string& path, long min) {
  const Json& v = obj.at(key);
  if (!v.is_number_integer()) throw ConfigError(join(path, key), "must be an integer");
  const long x = v.get<long>();
  if (x < min) throw ConfigError(join(path, key), "must be at least " + std::to_string(min));
  return x;
}

bool get_bool(const Json& obj, const std::string& key, const std::string& path) {
  if (!obj.at(key).is_boolean()) throw ConfigError(join(path, key), "must be true or false");
  return obj.at(key).get<bool>();
}

std::string get_string(const Json& obj, const std::string& key, const std::string& path) {
  if (!obj.at(key).is_string()) throw ConfigError(join(path, key), "must be a string");
  return obj.at(key).get<std::string>();
}

void check_keys(const Json& obj, const std::string& path, std::initializer_list<const char*> allowed) {
  if (!obj.is_object()) throw ConfigError(path.empty() ? "config" : path, "must be an object");
  for (const auto& [key, value] : obj.items()) {
    if (std::none_of(allowed.begin(), allowed.end(), [&](const char* a) { return key == a; })) {
      throw ConfigError(join(path, key), "unknown key");
    }
  }
}

SolverOptions parse_solver(const Json& s) {
  const std::string p = "solver";
  check_keys(s, p,
             {"condition_limit", "singular_threshold", "dense_fallback_max_dim", "zero_shift",
              "least_squares_max_iterations", "least_squares_tolerance", "residual_limit"});
  SolverOptions o;
  if (s.contains("condition_limit")) o.condition_limit = get_number(s, "condition_limit", p);
  if (s.contains("singular_threshold")) o.singular_threshold = get_number(s, "singular_threshold", p);
  if (s.contains("dense_fallback_max_dim")) o.dense_fallback_max_dim = get_integer(s, "dense_fallback_max_dim", p, 0);
  if (s.contains("zero_shift")) {
    const auto z = get_string(s, "zero_shift", p);
    if (z == "bordered_lu") {
      o.zero_shift = ZeroShiftMethod::kBorderedLU;
    } else if (z == "least_squares") {
      o.zero_shift = ZeroShiftMethod::kLeastSquares;
    } else {
      throw ConfigError("solver.zero_shift", "must be \"bordered_lu\" or \"least_squares\"");
    }
  }
  if (s.contains("least_squares_max_iterations")) {
    o.least_squares_max_iterations = static_cast<int>(get_integer(s, "least_squares_max_iterations", p, 1));
  }
  if (s.contains("least_squares_tolerance")) o.least_squares_tolerance = get_number(s, "least_squares_tolerance", p);
  if (s.contains("residual_limit")) o.residual_limit = get_number(s, "residual_limit", p);
  return o;
}

OracleRun parse_oracle(const Json& s) {
  const std::string p = "oracle";
  check_keys(s, p,
             {"rtol", "atol", "samples_per_period", "transient_skip", "average_periods", "stationarity_tolerance",
              "stationarity_floor", "cross_check_initial_states", "eigenvalue_monitor_interval", "max_steps", "t_end",
              "initial_state"});
  OracleRun r;
  auto& c = r.config;
  if (s.contains("rtol")) c.rtol = get_number(s, "rtol", p);
  if (s.contains("atol")) c.atol = get_number(s, "atol", p);
  if (s.contains("samples_per_period")) c.samples_per_period = static_cast<int>(get_integer(s, "samples_per_period", p, 1));
  if (s.contains("transient_skip")) c.transient_skip = get_number(s, "transient_skip", p);
  if (s.contains("average_periods")) c.average_periods = static_cast<int>(get_integer(s, "average_periods", p, 100));
  if (s.contains("stationarity_tolerance")) c.stationarity_tolerance = get_number(s, "stationarity_tolerance", p);
  if (s.contains("stationarity_floor")) c.stationarity_floor = get_number(s, "stationarity_floor", p);
  if (s.contains("cross_check_initial_states")) c.cross_check_initial_states = get_bool(s, "cross_check_initial_states", p);
  if (s.contains("eigenvalue_monitor_interval")) {
    c.eigenvalue_monitor_interval = static_cast<int>(get_integer(s, "eigenvalue_monitor_interval", p, 0));
  }
  if (s.contains("max_steps")) c.max_steps = get_integer(s, "max_steps", p, 1);
  if (s.contains("t_end")) {
    r.t_end = get_number(s, "t_end", p);
    if (*r.t_end < 0.0) throw ConfigError("oracle.t_end", "must be nonnegative");
  }
  if (s.contains("initial_state")) r.initial_state = get_string(s, "initial_state", p);
  return r;
}

SweepAxis parse_sweep(const Json& s) {
  const std::string p = "sweep";
  check_keys(s, p, {"axis", "values", "linspace"});
  SweepAxis a;
  if (s.contains("axis")) a.axis = get_string(s, "axis", p);
  if (s.contains("values") == s.contains("linspace")) throw ConfigError(p, "needs exactly one of values or linspace");
  if (s.contains("values")) {
    const Json& v = s["values"];
    if (!v.is_array() || v.empty()) throw ConfigError("sweep.values", "must be a non-empty array");
    for (std::size_t i = 0; i < v.size(); ++i) {
      if (!v[i].is_number() || !std::isfinite(v[i].get<double>())) {
        throw ConfigError("sweep.values[" + std::to_string(i) + "]", "must be a finite number");
      }
      a.values.push_back(v[i].get<double>());
    }
  } else {
    const Json& l = s["linspace"];
    if (!l.is_array() || l.size() != 3 || !l[0].is_number() || !l[1].is_number() || !l[2].is_number_integer()) {
      throw ConfigError("sweep.linspace", "must be [first, last, count]");
    }
    const long count = l[2].get<long>();
    if (count < 1) throw ConfigError("sweep.linspace", "count must be at least 1");
    try {
      a.values = linspace(l[0].get<double>(), l[1].get<double>(), static_cast<int>(count));
    } catch (const ConfigError& e) {
      throw ConfigError("sweep.linspace", e.what());
    }
  }
  return a;
}

Ranking parse_ranking(const Json& s) {
  if (!s.is_array()) throw ConfigError("fixed_ranking", "must be an array of {n, m, relevance}");
  Ranking r;
  for (std::size_t i = 0; i < s.size(); ++i) {
    const std::string p = "fixed_ranking[" + std::to_string(i) + "]";
    check_keys(s[i], p, {"n", "m", "relevance"});
    if (!s[i].contains("n") || !s[i].contains("m")) throw ConfigError(p, "needs n and m");
    RankedTerm t;
    t.n = static_cast<int>(get_integer(s[i], "n", p, 0));
    t.m = static_cast<int>(get_integer(s[i], "m", p, 0));
    // Without explicit weights the list order is the ranking.
    t.relevance = s[i].contains("relevance") ? get_number(s[i], "relevance", p) : static_cast<double>(s.size() - i);
    r.terms.push_back(t);
  }
  return r;
}

void check_format(const std::string& f) {
  if (f != "json" && f != "csv" && f != "dot") throw ConfigError("format", "must be csv, json or dot");
}

// Runs fn against the configured output file, or `fallback` when no path is set.
void with_output(const std::filesystem::path& path, std::ostream& fallback, const std::function<void(std::ostream&)>& fn) {
  if (path.empty()) {
    fn(fallback);
    return;
  }
  std::ofstream file(path);
  if (!file) throw ConfigError("out", "cannot write " + path.string());
  fn(file);
}

int guarded(std::ostream& err, const std::function<int()>& fn) {
  try {
    return fn();
  } catch (const ConfigError& e) {
    err << "error: invalid configuration: " << e.what() << '\n';
    return kError;
  } catch (const StiffnessError& e) {
    err << "error: " << e.what() << " (t = " << format_double(e.time) << ", step = " << format_double(e.step) << ")\n";
    return kNotConverged;
  } catch (const NotStationaryError& e) {
    err << "error: " << e.what() << '\n';
    return kNotConverged;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kError;
  }
}

std::vector<std::string> observable_names(const RunConfig& config, const LindbladModel& model) {
  if (!config.observables.empty()) {
    for (const auto& name : config.observables) {
      if (model.find_observable(name) == nullptr) throw ConfigError("observables", "model has no observable '" + name + "'");
    }
    return config.observables;
  }
  std::vector<std::string> names;
  for (const auto& o : model.observables) names.push_back(o.label);
  return names;
}

std::vector<ObservableSpec> observable_specs(const LindbladModel& model, const std::vector<std::string>& names) {
  std::vector<ObservableSpec> out;
  for (const auto& n : names) out.push_back(*model.find_observable(n));
  return out;
}

ArwaResult run_solver(const RunConfig& config, const LindbladModel& model) {
  if (config.fixed_ranking) {
    Ranking r = *config.fixed_ranking;
    for (const auto& t : r.terms) {
      if (t.n < 0 || t.m >= model.dim() || !(t.n < t.m)) throw ConfigError("fixed_ranking", "needs 0 <= n < m < D");
    }
    return solve_with_ranking(model, r, config.arwa);
  }
  return solve(model, config.arwa);
}

void log_result(const ArwaResult& r) {
  for (const auto& s : r.iterations) {
    spdlog::info("iteration {}: {} ranked terms, {} edges, residual {:.3e}, h drift {:.3e}", s.iteration,
                 s.ranking.terms.size(), s.edges.size(), s.residual, s.h_drift);
  }
  spdlog::info("converged={} oscillation={} dashed={}", r.converged, r.oscillation, r.graph.dashed_count());
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

}  // namespace

RunConfig parse_run_config(const Json& doc, const std::filesystem::path& base) {
  check_keys(doc, "",
             {"model", "max_iterations", "relevance_floor", "merge_policy", "parallel_relevance", "solver",
              "observables", "sweep", "oracle", "bench", "workers", "seed", "format", "out", "trajectory",
              "compare_oracle", "fixed_ranking"});
  RunConfig c;
  c.model_base = base;
  if (doc.contains("model")) {
    const Json& m = doc["model"];
    if (m.is_string()) {
      std::filesystem::path p = m.get<std::string>();
      if (p.is_relative() && !base.empty()) p = base / p;
      c.model_doc = read_json_file(p);
      c.model_base = p.parent_path();
    } else if (m.is_object()) {
      c.model_doc = m;
    } else {
      throw ConfigError("model", "must be an inline object or a path");
    }
    c.has_model = true;
  }
  if (doc.contains("max_iterations")) c.arwa.max_iterations = static_cast<int>(get_integer(doc, "max_iterations", "", 1));
  if (doc.contains("relevance_floor")) c.arwa.relevance_floor = get_number(doc, "relevance_floor", "");
  if (doc.contains("merge_policy")) {
    const auto p = get_string(doc, "merge_policy", "");
    if (p == "shift_higher") {
      c.arwa.merge_policy = MergePolicy::kShiftHigherEndpoint;
    } else if (p == "shift_lower") {
      c.arwa.merge_policy = MergePolicy::kShiftLowerEndpoint;
    } else {
      throw ConfigError("merge_policy", "must be \"shift_higher\" or \"shift_lower\"");
    }
  }
  if (doc.contains("parallel_relevance")) c.arwa.parallel = get_bool(doc, "parallel_relevance", "");
  if (doc.contains("solver")) c.arwa.solver = parse_solver(doc["solver"]);
  if (doc.contains("observables")) {
    const Json& o = doc["observables"];
    if (!o.is_array()) throw ConfigError("observables", "must be an array of labels");
    for (std::size_t i = 0; i < o.size(); ++i) {
      if (!o[i].is_string()) throw ConfigError("observables[" + std::to_string(i) + "]", "must be a string");
      c.observables.push_back(o[i].get<std::string>());
    }
  }
  if (doc.contains("sweep")) c.sweep = parse_sweep(doc["sweep"]);
  if (doc.contains("oracle")) c.oracle = parse_oracle(doc["oracle"]);
  if (doc.contains("bench")) {
    const Json& b = doc["bench"];
    check_keys(b, "bench", {"horizon", "measured_fraction", "repetitions", "synthetic_dim"});
    if (b.contains("horizon")) c.bench.horizon = get_number(b, "horizon", "bench");
    if (b.contains("measured_fraction")) c.bench.measured_fraction = get_number(b, "measured_fraction", "bench");
    if (!(c.bench.measured_fraction > 0.0 && c.bench.measured_fraction <= 1.0)) {
      throw ConfigError("bench.measured_fraction", "must be in (0, 1]");
    }
    if (b.contains("repetitions")) c.bench.repetitions = static_cast<int>(get_integer(b, "repetitions", "bench", 1));
    if (b.contains("synthetic_dim")) c.bench.synthetic_dim = static_cast<int>(get_integer(b, "synthetic_dim", "bench", 3));
  }
  if (doc.contains("workers")) c.workers = static_cast<int>(get_integer(doc, "workers", "", 1));
  if (doc.contains("seed")) c.seed = static_cast<std::uint64_t>(get_integer(doc, "seed", "", 0));
  if (doc.contains("format")) {
    c.format = get_string(doc, "format", "");
    check_format(c.format);
  }
  if (doc.contains("out")) c.out_path = get_string(doc, "out", "");
  if (doc.contains("trajectory")) c.trajectory_path = get_string(doc, "trajectory", "");
  if (doc.contains("compare_oracle")) c.compare_oracle = get_bool(doc, "compare_oracle", "");
  if (doc.contains("fixed_ranking")) c.fixed_ranking = parse_ranking(doc["fixed_ranking"]);
  return c;
}

RunConfig make_run_config(const CliOptions& o) {
  RunConfig c;
  if (!o.config_path.empty()) {
    c = parse_run_config(read_json_file(o.config_path), o.config_path.parent_path());
  }
  if (!o.model_path.empty()) {
    c.model_doc = read_json_file(o.model_path);
    c.model_base = o.model_path.parent_path();
    c.has_model = true;
  }
  if (o.format) {
    check_format(*o.format);
    c.format = *o.format;
  }
  if (o.workers) {
    if (*o.workers < 1) throw ConfigError("workers", "must be at least 1");
    c.workers = *o.workers;
  }
  if (o.seed) c.seed = *o.seed;
  if (!o.out_path.empty()) c.out_path = o.out_path;
  if (!o.trajectory_path.empty()) c.trajectory_path = o.trajectory_path;
  c.compare_oracle = c.compare_oracle || o.compare_oracle;
  return c;
}

LindbladModel build_model(const RunConfig& config) {
  if (!config.has_model) throw ConfigError("model", "no model given (use --model or the config's \"model\" key)");
  return model_from_json(config.model_doc, config.model_base);
}

Operator initial_state(const LindbladModel& model, const std::string& spec) {
  const int d = model.dim();
  if (spec == "thermal") return thermal_state(model);
  if (spec == "ground") return basis_operator(d, 0, 0);
  if (spec == "excited") return basis_operator(d, d - 1, d - 1);
  if (spec.rfind("level:", 0) == 0) {
    int n = -1;
    try {
      n = std::stoi(spec.substr(6));
    } catch (const std::exception&) {
    }
    if (n < 0 || n >= d) throw ConfigError("oracle.initial_state", "level out of range");
    return basis_operator(d, n, n);
  }
  throw ConfigError("oracle.initial_state", "must be thermal, ground, excited or level:<n>");
}

Json result_to_json(const ArwaResult& r, const LindbladModel& model, const std::vector<std::string>& observables) {
  Json obs = Json::object();
  for (const auto& name : observables) obs[name] = expectation_magnitude(r, *model.find_observable(name));
  Json dashed = Json::array();
  Json solid = Json::array();
  for (const auto& e : r.graph.edges()) {
    Json edge = {{"n", e.n}, {"m", e.m}, {"relevance", e.weight}};
    (e.style == EdgeStyle::kSolid ? solid : dashed).push_back(edge);
  }
  Json trace = Json::array();
  for (const auto& s : r.iterations) {
    int n_solid = 0;
    for (const auto& e : s.edges) n_solid += e.style == EdgeStyle::kSolid;
    trace.push_back({{"iteration", s.iteration},
                     {"ranked_terms", s.ranking.terms.size()},
                     {"solid_edges", n_solid},
                     {"dashed_edges", static_cast<int>(s.edges.size()) - n_solid},
                     {"labels", s.labels},
                     {"residual", s.residual},
                     {"h_drift", s.h_drift}});
  }
  return {{"converged", r.converged},
          {"oscillation", r.oscillation},
          {"iterations", r.iteration_count()},
          {"residual", r.residual},
          {"dimension", model.dim()},
          {"drive_frequency", model.drive_frequency},
          {"observables", obs},
          {"labels", r.graph.frame_labels()},
          {"solid_edges", solid},
          {"dashed_edges", dashed},
          {"iteration_trace", trace}};
}

int cmd_solve(const RunConfig& config, std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    const LindbladModel model = build_model(config);
    const auto names = observable_names(config, model);
    if (config.format == "csv") {
      // Same path as a one-point sweep so both give identical rows.
      const double param = config.model_doc.contains("drive_frequency") && config.model_doc["drive_frequency"].is_number()
                               ? config.model_doc["drive_frequency"].get<double>()
                               : model.drive_frequency;
      SweepConfig sc;
      sc.arwa = config.arwa;
      sc.compare_oracle = config.compare_oracle;
      sc.oracle = config.oracle.config;
      SweepTable table;
      table.observables = names;
      table.has_oracle = config.compare_oracle;
      table.rows.push_back(sweep_row([&](double) { return model; }, param, names, sc));
      with_output(config.out_path, out, [&](std::ostream& os) { write_sweep_csv(os, table); });
      const auto& row = table.rows.front();
      if (!row.error.empty()) {
        err << "error: " << row.error << '\n';
        return static_cast<int>(kError);
      }
      return static_cast<int>(row.converged ? kOk : kNotConverged);
    }
    const ArwaResult r = run_solver(config, model);
    log_result(r);
    Json doc = result_to_json(r, model, names);
    if (config.compare_oracle) {
      const auto specs = observable_specs(model, names);
      const AverageResult avg = long_time_average(model, specs, config.oracle.config);
      Json o = Json::object();
      double worst = 0.0;
      for (std::size_t i = 0; i < names.size(); ++i) {
        o[names[i]] = avg.magnitudes[i];
        const double a = doc["observables"][names[i]].get<double>();
        const double ref = std::max(std::abs(a), avg.magnitudes[i]);
        if (ref > 0.0) worst = std::max(worst, std::abs(a - avg.magnitudes[i]) / ref);
      }
      doc["oracle"] = {{"observables", o}, {"max_relative_deviation", worst}};
    }
    with_output(config.out_path, out, [&](std::ostream& os) { os << doc.dump(2) << '\n'; });
    return static_cast<int>(r.converged ? kOk : kNotConverged);
  });
}

int cmd_sweep(const RunConfig& config, std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    if (!config.sweep) throw ConfigError("sweep", "sweep axis and values are required");
    if (!config.has_model) throw ConfigError("model", "no model given (use --model or the config's \"model\" key)");
    const ModelFactory factory = json_axis(config.model_doc, config.sweep->axis, config.model_base);
    const LindbladModel first = factory(config.sweep->values.front());
    const auto names = observable_names(config, first);
    SweepConfig sc;
    sc.arwa = config.arwa;
    sc.workers = config.workers;
    sc.compare_oracle = config.compare_oracle;
    sc.oracle = config.oracle.config;
    if (sc.workers > 1) sc.arwa.parallel = false;  // rows already occupy the workers
    const auto t0 = std::chrono::steady_clock::now();
    const SweepTable table = sweep(factory, config.sweep->values, names, sc);
    spdlog::info("sweep of {} rows took {:.3f} s", table.rows.size(), seconds_since(t0));
    with_output(config.out_path, out, [&](std::ostream& os) {
      if (config.format == "json") {
        Json rows = Json::array();
        for (const auto& r : table.rows) {
          Json row = {{"parameter", r.parameter},
                      {"iterations", r.iterations},
                      {"converged", r.converged},
                      {"dashed_count", r.dashed_count}};
          Json vals = Json::object();
          for (std::size_t i = 0; i < r.values.size(); ++i) vals[names[i]] = r.values[i];
          row["observables"] = vals;
          if (table.has_oracle) {
            Json ov = Json::object();
            for (std::size_t i = 0; i < r.oracle_values.size(); ++i) ov[names[i]] = r.oracle_values[i];
            row["oracle"] = ov;
          }
          if (!r.error.empty()) row["error"] = r.error;
          rows.push_back(row);
        }
        os << Json{{"axis", config.sweep->axis}, {"rows", rows}}.dump(2) << '\n';
      } else {
        write_sweep_csv(os, table);
      }
    });
    bool all_ok = true;
    for (const auto& r : table.rows) {
      if (!r.error.empty()) err << "row " << format_double(r.parameter) << ": " << r.error << '\n';
      all_ok = all_ok && r.error.empty() && r.converged;
    }
    return static_cast<int>(all_ok ? kOk : kNotConverged);
  });
}

int cmd_graph(const RunConfig& config, std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    const LindbladModel model = build_model(config);
    const ArwaResult r = run_solver(config, model);
    log_result(r);
    const std::string dot = export_dot(r.graph);
    const std::string json = graph_to_json(r.graph).dump(2) + "\n";
    const bool json_primary = config.format == "json";
    with_output(config.out_path, out, [&](std::ostream& os) { os << (json_primary ? json : dot); });
    if (!config.out_path.empty()) {
      auto sibling = config.out_path;
      sibling.replace_extension(json_primary ? ".dot" : ".json");
      if (sibling != config.out_path) {
        std::ofstream f(sibling);
        if (!f) throw ConfigError("out", "cannot write " + sibling.string());
        f << (json_primary ? dot : json);
      }
    }
    return static_cast<int>(r.converged ? kOk : kNotConverged);
  });
}

int cmd_oracle(const RunConfig& config, std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    const LindbladModel model = build_model(config);
    const auto names = observable_names(config, model);
    const auto specs = observable_specs(model, names);
    const Operator rho0 = initial_state(model, config.oracle.initial_state);
    Json doc;
    TrajectoryResult traj;
    if (config.oracle.t_end) {
      traj = integrate(model, rho0, *config.oracle.t_end, specs, config.oracle.config);
      Json final_values = Json::object();
      for (std::size_t i = 0; i < names.size(); ++i) {
        const Complex v = (specs[i].op * traj.final_state).trace();
        final_values[names[i]] = {{"re", v.real()}, {"im", v.imag()}, {"abs", std::abs(v)}};
      }
      doc["t_end"] = *config.oracle.t_end;
      doc["final"] = final_values;
    } else {
      AverageResult avg = long_time_average(model, specs, config.oracle.config, &rho0);
      Json mags = Json::object();
      Json halves = Json::object();
      for (std::size_t i = 0; i < names.size(); ++i) {
        mags[names[i]] = avg.magnitudes[i];
        halves[names[i]] = {avg.first_half[i], avg.second_half[i]};
      }
      doc["observables"] = mags;
      doc["window_halves"] = halves;
      doc["transient_skip"] = avg.transient_skip;
      doc["window"] = avg.window;
      if (!avg.alternate_magnitudes.empty()) {
        Json alt = Json::object();
        for (std::size_t i = 0; i < names.size(); ++i) alt[names[i]] = avg.alternate_magnitudes[i];
        doc["alternate_initial_state"] = alt;
        doc["initial_state_deviation"] = avg.initial_state_deviation;
      }
      traj = std::move(avg.trajectory);
    }
    doc["steps"] = traj.steps;
    doc["rejected_steps"] = traj.rejected_steps;
    doc["max_trace_drift"] = traj.max_trace_drift;
    doc["min_eigenvalue"] = traj.min_eigenvalue;
    if (!config.trajectory_path.empty()) {
      std::ofstream f(config.trajectory_path);
      if (!f) throw ConfigError("trajectory", "cannot write " + config.trajectory_path.string());
      write_trajectory_csv(f, traj);
    }
    with_output(config.out_path, out, [&](std::ostream& os) {
      if (config.format == "csv") {
        write_trajectory_csv(os, traj);
      } else {
        os << doc.dump(2) << '\n';
      }
    });
    return static_cast<int>(kOk);
  });
}

BenchReport run_bench(const LindbladModel& model, const BenchSettings& settings, const ArwaConfig& arwa,
                      const OracleConfig& oracle) {
  BenchReport rep;
  rep.dim = model.dim();
  double slowest = std::numeric_limits<double>::infinity();
  for (const auto& c : model.channels) slowest = std::min(slowest, c.rate);
  if (!std::isfinite(slowest)) throw ModelError("bench needs at least one decay channel");
  rep.horizon = settings.horizon.value_or(10.0 / slowest);
  rep.measured_horizon = settings.measured_fraction * rep.horizon;

  const auto time_solve = [&](bool parallel) {
    ArwaConfig cfg = arwa;
    cfg.parallel = parallel;
    double best = std::numeric_limits<double>::infinity();
    for (int i = 0; i < settings.repetitions; ++i) {
      const auto t0 = std::chrono::steady_clock::now();
      const ArwaResult r = solve(model, cfg);
      best = std::min(best, seconds_since(t0));
      rep.converged = r.converged;
    }
    return best;
  };
  rep.arwa_seconds = time_solve(true);
  rep.arwa_serial_seconds = time_solve(false);

  OracleConfig oc = oracle;
  oc.eigenvalue_monitor_interval = 0;
  const Operator rho0 = thermal_state(model);
  const auto t0 = std::chrono::steady_clock::now();
  // Only the final grid point is sampled; the cost is the integration itself.
  integrate(model, rho0, rep.measured_horizon, {}, oc, rep.measured_horizon);
  rep.oracle_seconds = seconds_since(t0);
  rep.extrapolated_oracle_seconds = rep.oracle_seconds * rep.horizon / rep.measured_horizon;
  rep.speedup = rep.extrapolated_oracle_seconds / rep.arwa_seconds;
  return rep;
}

int cmd_bench(const RunConfig& config, std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    const LindbladModel model =
        config.has_model ? build_model(config) : synthetic_metastable(config.bench.synthetic_dim, config.seed);
    const BenchReport rep = run_bench(model, config.bench, config.arwa, config.oracle.config);
    const Json doc = {{"dimension", rep.dim},
                      {"arwa_seconds", rep.arwa_seconds},
                      {"arwa_serial_seconds", rep.arwa_serial_seconds},
                      {"horizon", rep.horizon},
                      {"measured_horizon", rep.measured_horizon},
                      {"oracle_seconds", rep.oracle_seconds},
                      {"extrapolated_oracle_seconds", rep.extrapolated_oracle_seconds},
                      {"speedup", rep.speedup},
                      {"converged", rep.converged}};
    with_output(config.out_path, out, [&](std::ostream& os) { os << doc.dump(2) << '\n'; });
    return static_cast<int>(kOk);
  });
}

}  // namespace arwa::cli
