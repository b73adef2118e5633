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


#include "arwa/arwa.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <string>
#include <utility>

#include "arwa/errors.hpp"

namespace arwa {

namespace {

// Structural identity of a frame: solid edges plus labels relative to their minimum.
struct GraphKey {
  std::vector<std::pair<int, int>> solid;
  std::vector<std::optional<int>> labels;

  bool operator==(const GraphKey&) const = default;
};

GraphKey key_of(const FrameGraph& g) {
  GraphKey key;
  for (const auto& e : g.edges()) {
    if (e.style == EdgeStyle::kSolid) key.solid.emplace_back(e.n, e.m);
  }
  std::sort(key.solid.begin(), key.solid.end());
  key.labels = g.labels();
  std::optional<int> lo;
  for (const auto& l : key.labels) {
    if (l && (!lo || *l < *lo)) lo = l;
  }
  for (auto& l : key.labels) {
    if (l) *l -= *lo;
  }
  return key;
}

bool all_drives_zero(const LindbladModel& model) {
  return std::all_of(model.drives.begin(), model.drives.end(),
                     [](const DriveTerm& t) { return t.amplitude == 0.0; });
}

template <class F>
auto with_context(int iteration, F&& f) -> decltype(f()) {
  const std::string where = "iteration " + std::to_string(iteration) + ": ";
  try {
    return f();
  } catch (const SolverFailureError& e) {
    throw SolverFailureError(where + e.what(), e.residual);
  } catch (const NonUniqueSteadyStateError& e) {
    throw NonUniqueSteadyStateError(where + e.what(), e.smallest_singular_value, e.second_smallest_singular_value);
  }
}

void record_relevances(LindbladModel& model, const std::vector<double>& rel) {
  for (std::size_t i = 0; i < rel.size(); ++i) model.drives[i].relevance = rel[i];
}

}  // namespace

FrameSolution solve_frame(const LindbladModel& model, const FrameGraph& graph, const SolverOptions& options) {
  FrameSolution s;
  s.frame = extract_frame(graph, model);
  s.L0 = liouvillian(s.frame.h, model.channels);
  s.rho_s = solve_steady_state(s.L0, options);
  const double scale = s.L0.norm();
  s.residual = scale > 0.0 ? frobenius_norm(arwa::apply(s.L0, s.rho_s)) / scale : 0.0;
  return s;
}

ArwaResult solve(const LindbladModel& input, const ArwaConfig& config) {
  if (config.max_iterations < 1) throw ConfigError("max_iterations", "must be at least 1");
  input.validate();
  LindbladModel model = input;
  ArwaResult result;

  auto rel = bootstrap_relevances(model);
  record_relevances(model, rel);
  Ranking ranking = rank(model.drives, rel, config.relevance_floor, 1);
  FrameGraph graph = build_graph(ranking, model.dim(), config.merge_policy);
  FrameSolution sol = with_context(1, [&] { return solve_frame(model, graph, config.solver); });
  result.iterations.push_back({1, ranking, graph.edges(), graph.frame_labels(), sol.residual, 0.0});

  std::vector<GraphKey> seen{key_of(graph)};
  if (all_drives_zero(model)) {
    result.converged = true;
  } else {
    for (int it = 2; it <= config.max_iterations; ++it) {
      apply_frame(model, graph);
      rel = with_context(it, [&] {
        return config.parallel ? iterative_relevances_parallel(model, sol.L0, sol.rho_s, model.drives, config.solver)
                               : iterative_relevances_serial(model, sol.L0, sol.rho_s, model.drives, config.solver);
      });
      record_relevances(model, rel);
      ranking = rank(model.drives, rel, config.relevance_floor, it);
      FrameGraph next = build_graph(ranking, model.dim(), config.merge_policy);
      FrameSolution next_sol = with_context(it, [&] { return solve_frame(model, next, config.solver); });
      const double drift = frobenius_norm(next_sol.frame.h - sol.frame.h);
      result.iterations.push_back({it, ranking, next.edges(), next.frame_labels(), next_sol.residual, drift});

      const GraphKey key = key_of(next);
      graph = std::move(next);
      sol = std::move(next_sol);
      if (key == seen.back()) {
        result.converged = true;
        break;
      }
      if (std::find(seen.begin(), seen.end(), key) != seen.end()) {
        result.oscillation = true;
        break;
      }
      seen.push_back(key);
    }
  }

  apply_frame(model, graph);
  result.rho_s = std::move(sol.rho_s);
  result.h = std::move(sol.frame.h);
  result.omega = std::move(sol.frame.omega);
  result.graph = std::move(graph);
  result.drives = std::move(model.drives);
  result.residual = sol.residual;
  return result;
}

ArwaResult solve_with_ranking(const LindbladModel& input, const Ranking& ranking, const ArwaConfig& config) {
  input.validate();
  LindbladModel model = input;
  FrameGraph graph = build_graph(ranking, model.dim(), config.merge_policy);
  FrameSolution sol = solve_frame(model, graph, config.solver);
  for (auto& t : model.drives) {
    for (const auto& r : ranking.terms) {
      if (r.n == t.n && r.m == t.m) t.relevance = r.relevance;
    }
  }
  apply_frame(model, graph);

  ArwaResult result;
  result.iterations.push_back({ranking.iteration, ranking, graph.edges(), graph.frame_labels(), sol.residual, 0.0});
  result.converged = true;
  result.rho_s = std::move(sol.rho_s);
  result.h = std::move(sol.frame.h);
  result.omega = std::move(sol.frame.omega);
  result.graph = std::move(graph);
  result.drives = std::move(model.drives);
  result.residual = sol.residual;
  return result;
}

double expectation_magnitude(const Operator& rho, const Operator& op) {
  if (op.rows() != rho.rows() || op.cols() != rho.cols()) {
    throw DimensionMismatchError("observable is " + std::to_string(op.rows()) + "x" + std::to_string(op.cols()) +
                                 ", state is " + std::to_string(rho.rows()) + "x" + std::to_string(rho.cols()));
  }
  return std::abs((op * rho).trace());
}

double expectation_magnitude(const ArwaResult& result, const ObservableSpec& obs) {
  return expectation_magnitude(result.rho_s, obs.op);
}

double period_rms_magnitude(const Operator& rho, std::span<const int> labels, const Operator& op) {
  expectation_magnitude(rho, op);  // dimension check
  if (static_cast<Eigen::Index>(labels.size()) != rho.rows()) {
    throw DimensionMismatchError("frame has " + std::to_string(labels.size()) + " labels, state is " +
                                 std::to_string(rho.rows()) + "x" + std::to_string(rho.cols()));
  }
  std::map<int, Complex> components;
  for (Eigen::Index n = 0; n < op.rows(); ++n) {
    for (Eigen::Index m = 0; m < op.cols(); ++m) {
      if (op(n, m) != 0.0) components[labels[m] - labels[n]] += op(n, m) * rho(m, n);
    }
  }
  double sum = 0.0;
  for (const auto& [shift, c] : components) sum += std::norm(c);
  return std::sqrt(sum);
}

double period_rms_magnitude(const ArwaResult& result, const ObservableSpec& obs) {
  const auto k = result.graph.frame_labels();
  return period_rms_magnitude(result.rho_s, k, obs.op);
}

}  // namespace arwa
