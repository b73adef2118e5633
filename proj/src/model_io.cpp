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


#include "arwa/model_io.hpp"

#include <cmath>
#include <fstream>
#include <numbers>
#include <sstream>

#include "arwa/errors.hpp"
#include "arwa/systems.hpp"

namespace arwa {

namespace {

constexpr double kGHz = 2.0 * std::numbers::pi * 1e9;

std::string join(const std::string& path, const std::string& key) { return path.empty() ? key : path + "." + key; }
std::string join(const std::string& path, std::size_t i) { return path + "[" + std::to_string(i) + "]"; }

const Json& require(const Json& obj, const std::string& key, const std::string& path) {
  if (!obj.is_object()) throw ConfigError(path.empty() ? "model" : path, "must be an object");
  const auto it = obj.find(key);
  if (it == obj.end()) throw ConfigError(join(path, key), "is required");
  return *it;
}

double as_number(const Json& v, const std::string& field) {
  if (!v.is_number()) throw ConfigError(field, "must be a number");
  const double x = v.get<double>();
  if (!std::isfinite(x)) throw ConfigError(field, "must be finite");
  return x;
}

double number(const Json& obj, const std::string& key, const std::string& path) {
  return as_number(require(obj, key, path), join(path, key));
}

double number_or(const Json& obj, const std::string& key, const std::string& path, double fallback) {
  return obj.contains(key) ? as_number(obj[key], join(path, key)) : fallback;
}

int integer(const Json& obj, const std::string& key, const std::string& path) {
  const Json& v = require(obj, key, path);
  if (!v.is_number_integer()) throw ConfigError(join(path, key), "must be an integer");
  return v.get<int>();
}

int integer_or(const Json& obj, const std::string& key, const std::string& path, int fallback) {
  return obj.contains(key) ? integer(obj, key, path) : fallback;
}

bool boolean_or(const Json& obj, const std::string& key, const std::string& path, bool fallback) {
  if (!obj.contains(key)) return fallback;
  if (!obj[key].is_boolean()) throw ConfigError(join(path, key), "must be true or false");
  return obj[key].get<bool>();
}

// A number, [re, im] or {"re": .., "im": ..}.
Complex complex_value(const Json& v, const std::string& field) {
  if (v.is_number()) return {as_number(v, field), 0.0};
  if (v.is_array() && v.size() == 2) return {as_number(v[0], field + "[0]"), as_number(v[1], field + "[1]")};
  if (v.is_object()) return {number_or(v, "re", field, 0.0), number_or(v, "im", field, 0.0)};
  throw ConfigError(field, "must be a number, [re, im] or {\"re\", \"im\"}");
}

std::vector<double> number_list(const Json& v, const std::string& field) {
  if (!v.is_array()) throw ConfigError(field, "must be an array of numbers");
  std::vector<double> out;
  for (std::size_t i = 0; i < v.size(); ++i) out.push_back(as_number(v[i], join(field, i)));
  return out;
}

std::filesystem::path resolve(const std::filesystem::path& base, const Json& v, const std::string& field) {
  if (!v.is_string()) throw ConfigError(field, "must be a path string");
  std::filesystem::path p = v.get<std::string>();
  return p.is_relative() && !base.empty() ? base / p : p;
}

Operator dense_matrix(const Json& rows, const std::string& field) {
  if (!rows.is_array() || rows.empty()) throw ConfigError(field, "must be a non-empty array of rows");
  const auto n = static_cast<Eigen::Index>(rows.size());
  Operator m(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    const Json& row = rows[i];
    const std::string rf = join(field, static_cast<std::size_t>(i));
    if (!row.is_array() || static_cast<Eigen::Index>(row.size()) != n) throw ConfigError(rf, "matrix must be square");
    for (Eigen::Index j = 0; j < n; ++j) m(i, j) = complex_value(row[j], join(rf, static_cast<std::size_t>(j)));
  }
  return m;
}

// Operator given by "entries", "matrix" or "matrix_path"; frequency-valued when scale != 1.
Operator operator_from(const Json& obj, int dim, const std::string& path, const std::filesystem::path& base,
                       double scale) {
  Operator op;
  if (obj.contains("entries")) {
    const Json& entries = obj["entries"];
    const std::string field = join(path, "entries");
    if (!entries.is_array()) throw ConfigError(field, "must be an array");
    op = Operator::Zero(dim, dim);
    for (std::size_t k = 0; k < entries.size(); ++k) {
      const std::string ef = join(field, k);
      const int i = integer(entries[k], "i", ef);
      const int j = integer(entries[k], "j", ef);
      if (i < 0 || j < 0 || i >= dim || j >= dim) throw ConfigError(ef, "index out of range");
      op(i, j) += Complex(number_or(entries[k], "re", ef, 0.0), number_or(entries[k], "im", ef, 0.0));
    }
  } else if (obj.contains("matrix")) {
    op = dense_matrix(obj["matrix"], join(path, "matrix"));
  } else if (obj.contains("matrix_path")) {
    const auto file = resolve(base, obj["matrix_path"], join(path, "matrix_path"));
    if (file.extension() == ".json") {
      op = dense_matrix(require(read_json_file(file), "matrix", file.string()), file.string() + ".matrix");
    } else {
      op = read_csv_matrix(file).cast<Complex>();
    }
  } else {
    throw ConfigError(path, "needs one of entries, matrix or matrix_path");
  }
  if (op.rows() != dim || op.cols() != dim) throw ConfigError(path, "matrix must be " + std::to_string(dim) + "x" + std::to_string(dim));
  return op * scale;
}

std::vector<double> vector_from(const Json& obj, const std::string& key, const std::string& path,
                                const std::filesystem::path& base) {
  if (obj.contains(key)) return number_list(obj[key], join(path, key));
  const std::string pkey = key + "_path";
  if (obj.contains(pkey)) {
    const Eigen::MatrixXd m = read_csv_matrix(resolve(base, obj[pkey], join(path, pkey)));
    return std::vector<double>(m.data(), m.data() + m.size());
  }
  throw ConfigError(join(path, key), "is required (or " + pkey + ")");
}

LindbladModel build_from(const Json& b, double temperature, double omega_d, double f,
                         const std::filesystem::path& base) {
  const std::string path = "builder";
  const Json& type_v = require(b, "type", path);
  if (!type_v.is_string()) throw ConfigError("builder.type", "must be a string");
  const std::string type = type_v.get<std::string>();

  if (type == "driven_oscillator") {
    return driven_oscillator(f * number(b, "omega_r", path), f * number(b, "zeta", path), omega_d,
                             integer_or(b, "levels", path, 8), f * number(b, "kappa", path), temperature);
  }
  if (type == "transmon_resonator") {
    TransmonResonatorParams p;
    p.omega_r = f * number(b, "omega_r", path);
    for (double e : vector_from(b, "qubit_energies", path, base)) p.qubit_energies.push_back(f * e);
    for (double g : number_list(require(b, "couplings", path), "builder.couplings")) p.couplings.push_back(f * g);
    p.zeta = f * number(b, "zeta", path);
    p.omega_d = omega_d;
    p.photon_levels = integer_or(b, "photon_levels", path, 6);
    p.keep = integer_or(b, "keep", path, 0);
    p.kappa = f * number_or(b, "kappa", path, 0.0);
    p.qubit_decay = f * number_or(b, "qubit_decay", path, 0.0);
    p.temperature = temperature;
    return transmon_resonator(p);
  }
  if (type == "fluxonium_resonator") {
    FluxoniumResonatorParams p;
    for (double e : vector_from(b, "qubit_energies", path, base)) p.qubit_energies.push_back(f * e);
    const int nq = static_cast<int>(p.qubit_energies.size());
    Json charge = Json::object();
    if (b.contains("charge_matrix")) charge["matrix"] = b["charge_matrix"];
    if (b.contains("charge_matrix_path")) charge["matrix_path"] = b["charge_matrix_path"];
    p.charge_matrix = operator_from(charge, nq, "builder.charge_matrix", base, 1.0);
    p.omega_r = f * number(b, "omega_r", path);
    p.g = f * number(b, "g", path);
    p.zeta = f * number(b, "zeta", path);
    p.omega_d = omega_d;
    p.photon_levels = integer_or(b, "photon_levels", path, 6);
    p.keep = integer_or(b, "keep", path, 0);
    p.kappa = f * number_or(b, "kappa", path, 0.0);
    p.qubit_decay = f * number_or(b, "qubit_decay", path, 0.0);
    p.temperature = temperature;
    p.excitation_conserving = boolean_or(b, "excitation_conserving", path, false);
    return fluxonium_resonator(p);
  }
  if (type == "three_level") {
    ThreeLevelParams p;
    const auto e = number_list(require(b, "energies", path), "builder.energies");
    if (e.size() != 3) throw ConfigError("builder.energies", "needs exactly three values");
    for (int i = 0; i < 3; ++i) p.energies[i] = f * e[i];
    const auto drive = [&](const char* key) {
      return b.contains(key) ? f * complex_value(b[key], join(path, key)) : Complex{};
    };
    p.v01 = drive("v01");
    p.v02 = drive("v02");
    p.v12 = drive("v12");
    p.gamma10 = f * number_or(b, "gamma10", path, 0.0);
    p.gamma21 = f * number_or(b, "gamma21", path, 0.0);
    p.gamma20 = f * number_or(b, "gamma20", path, 0.0);
    p.dephasing = f * number_or(b, "dephasing", path, 0.0);
    p.temperature = temperature;
    p.omega_d = omega_d;
    return three_level(p);
  }
  throw ConfigError("builder.type", "unknown builder '" + type + "'");
}

void add_channel(LindbladModel& model, const Json& c, const std::string& path, const std::filesystem::path& base,
                 double f) {
  const Json& type_v = require(c, "type", path);
  if (!type_v.is_string()) throw ConfigError(join(path, "type"), "must be a string");
  const std::string type = type_v.get<std::string>();
  const double rate = f * number(c, "rate", path);
  if (!(rate > 0.0)) throw ConfigError(join(path, "rate"), "must be positive");
  const int d = model.dim();
  const auto index = [&](const char* key) {
    const int v = integer(c, key, path);
    if (v < 0 || v >= d) throw ConfigError(join(path, key), "state index out of range");
    return v;
  };

  if (type == "lowering" || type == "raising") {
    const int n = index("n");
    const int m = index("m");
    if (!(n < m)) throw ConfigError(path, "needs n < m");
    if (type == "raising") {
      model.channels.push_back({basis_operator(d, m, n), rate, model.energies[n] - model.energies[m]});
      return;
    }
    std::optional<double> up;
    if (c.contains("up_rate")) {
      up = f * as_number(c["up_rate"], join(path, "up_rate"));
      if (*up < 0.0) throw ConfigError(join(path, "up_rate"), "must be nonnegative");
    }
    add_transition(model, n, m, rate, up);
  } else if (type == "dephasing") {
    add_dephasing(model, index("n"), rate);
  } else if (type == "custom") {
    const Operator op = operator_from(c, d, path, base, 1.0);
    double omega = 0.0;
    if (c.contains("omega")) {
      omega = f * as_number(c["omega"], join(path, "omega"));
    } else {
      bool found = false;
      for (int j = 0; j < d && !found; ++j) {
        for (int i = 0; i < d && !found; ++i) {
          if (op(i, j) != 0.0) {
            omega = model.energies[j] - model.energies[i];
            found = true;
          }
        }
      }
      if (!found) throw ConfigError(path, "custom channel operator is zero");
    }
    model.channels.push_back({op, rate, omega});
  } else {
    throw ConfigError(join(path, "type"), "unknown channel type '" + type + "'");
  }
}

void add_observable(LindbladModel& model, const Json& o, const std::string& path, const std::filesystem::path& base) {
  const Json& label = require(o, "label", path);
  if (!label.is_string()) throw ConfigError(join(path, "label"), "must be a string");
  const std::string kind = o.value("kind", std::string("matrix"));
  ObservableSpec spec;
  spec.label = label.get<std::string>();
  if (kind == "drive") {
    spec.op = model.drive_operator();
  } else if (kind == "projector") {
    const int n = integer(o, "n", path);
    if (n < 0 || n >= model.dim()) throw ConfigError(join(path, "n"), "state index out of range");
    spec.op = basis_operator(model.dim(), n, n);
  } else if (kind == "matrix") {
    spec.op = operator_from(o, model.dim(), path, base, 1.0);
  } else {
    throw ConfigError(join(path, "kind"), "unknown observable kind '" + kind + "'");
  }
  std::erase_if(model.observables, [&](const ObservableSpec& s) { return s.label == spec.label; });
  model.observables.push_back(std::move(spec));
}

Json complex_entries(const Operator& op) {
  Json entries = Json::array();
  for (Eigen::Index j = 0; j < op.cols(); ++j) {
    for (Eigen::Index i = 0; i < op.rows(); ++i) {
      if (op(i, j) != 0.0) entries.push_back({{"i", i}, {"j", j}, {"re", op(i, j).real()}, {"im", op(i, j).imag()}});
    }
  }
  return entries;
}

}  // namespace

Json read_json_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError(path.string(), "cannot open file");
  try {
    return Json::parse(in);
  } catch (const Json::parse_error& e) {
    throw ConfigError(path.string(), std::string("invalid JSON: ") + e.what());
  }
}

Eigen::MatrixXd read_csv_matrix(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError(path.string(), "cannot open file");
  std::vector<std::vector<double>> rows;
  std::string line;
  while (std::getline(in, line)) {
    if (line.find_first_not_of(" \t\r") == std::string::npos || line[0] == '#') continue;
    std::vector<double> row;
    std::stringstream ss(line);
    ss.imbue(std::locale::classic());
    std::string cell;
    while (std::getline(ss, cell, ',')) {
      std::istringstream cs(cell);
      cs.imbue(std::locale::classic());
      double v = 0.0;
      if (!(cs >> v)) throw ConfigError(path.string(), "non-numeric CSV cell '" + cell + "'");
      row.push_back(v);
    }
    if (!rows.empty() && row.size() != rows.front().size()) throw ConfigError(path.string(), "ragged CSV rows");
    rows.push_back(std::move(row));
  }
  if (rows.empty()) throw ConfigError(path.string(), "empty CSV");
  Eigen::MatrixXd m(rows.size(), rows.front().size());
  for (std::size_t i = 0; i < rows.size(); ++i) {
    for (std::size_t j = 0; j < rows[i].size(); ++j) m(i, j) = rows[i][j];
  }
  return m;
}

LindbladModel model_from_json(const Json& doc, const std::filesystem::path& base) {
  if (!doc.is_object()) throw ConfigError("model", "must be a JSON object");
  double f = 1.0;
  if (doc.contains("frequency_unit")) {
    const Json& u = doc["frequency_unit"];
    if (u == "GHz") {
      f = kGHz;
    } else if (u != "rad/s") {
      throw ConfigError("frequency_unit", "must be \"GHz\" or \"rad/s\"");
    }
  }
  const double temperature = number_or(doc, "temperature_K", "", 0.0);
  if (temperature < 0.0) throw ConfigError("temperature_K", "must be nonnegative");
  const double omega_d = f * number(doc, "drive_frequency", "");
  if (!(omega_d > 0.0)) throw ConfigError("drive_frequency", "must be positive");

  LindbladModel model;
  try {
    if (doc.contains("builder")) {
      model = build_from(doc["builder"], temperature, omega_d, f, base);
    } else {
      for (double e : number_list(require(doc, "energies", ""), "energies")) model.energies.push_back(f * e);
      if (model.energies.empty()) throw ConfigError("energies", "must not be empty");
      model.temperature = temperature;
      model.drive_frequency = omega_d;
    }
  } catch (const ModelError& e) {
    throw ConfigError(doc.contains("builder") ? "builder" : "energies", e.what());
  }
  const int d = model.dim();

  if (doc.contains("drives")) {
    const Json& drives = doc["drives"];
    if (!drives.is_array()) throw ConfigError("drives", "must be an array");
    for (std::size_t k = 0; k < drives.size(); ++k) {
      const std::string path = join("drives", k);
      DriveTerm t;
      t.n = integer(drives[k], "n", path);
      t.m = integer(drives[k], "m", path);
      if (t.n < 0 || t.m >= d || !(t.n < t.m)) throw ConfigError(path, "needs 0 <= n < m < D");
      t.amplitude = f * Complex(number_or(drives[k], "re", path, 0.0), number_or(drives[k], "im", path, 0.0));
      model.drives.push_back(t);
    }
  }
  if (doc.contains("channels")) {
    const Json& channels = doc["channels"];
    if (!channels.is_array()) throw ConfigError("channels", "must be an array");
    for (std::size_t k = 0; k < channels.size(); ++k) {
      const std::string path = join("channels", k);
      try {
        add_channel(model, channels[k], path, base, f);
      } catch (const ModelError& e) {
        throw ConfigError(path, e.what());
      } catch (const InvalidRateError& e) {
        throw ConfigError(path, e.what());
      }
    }
  }
  if (doc.contains("observables")) {
    const Json& obs = doc["observables"];
    if (!obs.is_array()) throw ConfigError("observables", "must be an array");
    for (std::size_t k = 0; k < obs.size(); ++k) add_observable(model, obs[k], join("observables", k), base);
  } else if (!doc.contains("builder")) {
    model.observables.push_back({model.drive_operator(), "V"});
  }

  try {
    model.validate();
  } catch (const ModelError& e) {
    throw ConfigError("model", e.what());
  }
  return model;
}

LindbladModel load_model(const std::filesystem::path& path) {
  return model_from_json(read_json_file(path), path.parent_path());
}

Json model_to_json(const LindbladModel& model) {
  Json doc;
  doc["energies"] = model.energies;
  doc["temperature_K"] = model.temperature;
  doc["drive_frequency"] = model.drive_frequency;
  Json drives = Json::array();
  for (const auto& t : model.drives) {
    drives.push_back({{"n", t.n}, {"m", t.m}, {"re", t.amplitude.real()}, {"im", t.amplitude.imag()}});
  }
  doc["drives"] = drives;
  Json channels = Json::array();
  for (const auto& c : model.channels) {
    channels.push_back({{"type", "custom"}, {"rate", c.rate}, {"omega", c.omega}, {"entries", complex_entries(c.op)}});
  }
  doc["channels"] = channels;
  Json obs = Json::array();
  for (const auto& o : model.observables) obs.push_back({{"label", o.label}, {"entries", complex_entries(o.op)}});
  doc["observables"] = obs;
  return doc;
}

ModelFactory json_axis(Json doc, std::string axis, std::filesystem::path base) {
  if (axis != "drive_frequency" && axis != "temperature_K") {
    if (!doc.contains("builder") || !doc["builder"].is_object() || !doc["builder"].contains(axis)) {
      throw ConfigError("sweep.axis", "'" + axis + "' is neither drive_frequency, temperature_K nor a builder parameter");
    }
  }
  return [doc = std::move(doc), axis = std::move(axis), base = std::move(base)](double v) {
    Json d = doc;
    if (axis == "drive_frequency" || axis == "temperature_K") {
      d[axis] = v;
    } else {
      d["builder"][axis] = v;
    }
    return model_from_json(d, base);
  };
}

Json graph_to_json(const FrameGraph& graph) {
  Json vertices = Json::array();
  const auto k = graph.frame_labels();
  for (int v = 0; v < graph.dim(); ++v) {
    vertices.push_back({{"index", v}, {"k", k[v]}, {"in_graph", graph.label(v).has_value()}});
  }
  Json edges = Json::array();
  for (const auto& e : graph.edges()) {
    edges.push_back({{"n", e.n},
                     {"m", e.m},
                     {"style", e.style == EdgeStyle::kSolid ? "solid" : "dashed"},
                     {"weight", e.weight}});
  }
  return {{"vertices", vertices}, {"edges", edges}};
}

}  // namespace arwa
