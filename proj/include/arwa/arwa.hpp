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

#include <span>
#include <vector>

#include "arwa/frame_graph.hpp"
#include "arwa/model.hpp"
#include "arwa/operator_algebra.hpp"
#include "arwa/relevance.hpp"

namespace arwa {

struct ArwaConfig {
  int max_iterations = 20;
  SolverOptions solver;
  /// Relevances at or below this fraction of the largest are not ranked.
  double relevance_floor = 1e-14;
  MergePolicy merge_policy = MergePolicy::kShiftHigherEndpoint;
  /// Use the OpenMP relevance kernel; false selects the serial reference.
  bool parallel = true;
};

struct IterationSnapshot {
  int iteration = 0;
  Ranking ranking;
  std::vector<FrameEdge> edges;
  std::vector<int> labels;
  /// ||L0 rho_s||_F / ||L0||_F for this iteration's frame.
  double residual = 0.0;
  /// ||h - h_prev||_F, zero on the first iteration.
  double h_drift = 0.0;
};

struct ArwaResult {
  Operator rho_s;
  Operator h;
  Operator omega;
  FrameGraph graph;
  /// Drive terms with the final relevance, status and k_shift.
  std::vector<DriveTerm> drives;
  std::vector<IterationSnapshot> iterations;
  bool converged = false;
  /// A graph seen before (not the previous one) recurred.
  bool oscillation = false;
  double residual = 0.0;

  int iteration_count() const { return static_cast<int>(iterations.size()); }
};

/// Steady state of one fixed frame.
struct FrameSolution {
  Frame frame;
  Superoperator L0;
  Operator rho_s;
  double residual = 0.0;
};

FrameSolution solve_frame(const LindbladModel& model, const FrameGraph& graph, const SolverOptions& options = {});

/// Adaptive iteration: bootstrap ranking, then re-ranking against each new steady state until
/// the solid edges and labels (modulo a global shift) repeat.
ArwaResult solve(const LindbladModel& model, const ArwaConfig& config = {});

/// Single pass with an externally supplied ranking; no iteration.
ArwaResult solve_with_ranking(const LindbladModel& model, const Ranking& ranking, const ArwaConfig& config = {});

/// |Tr(obs rho_s)|. Throws DimensionMismatchError.
double expectation_magnitude(const ArwaResult& result, const ObservableSpec& obs);
double expectation_magnitude(const Operator& rho, const Operator& op);

/// RMS over one drive period of |Tr(obs rho(t))| for the lab-frame state predicted by the frame,
/// rho(t) = exp(-i Omega t) rho_s exp(i Omega t). Elements O_nm rho_mn rotating at different
/// multiples (k_m - k_n) w_d add in quadrature. Equals expectation_magnitude when every nonzero
/// element of obs shares one multiple.
double period_rms_magnitude(const ArwaResult& result, const ObservableSpec& obs);
double period_rms_magnitude(const Operator& rho, std::span<const int> labels, const Operator& op);

}  // namespace arwa
