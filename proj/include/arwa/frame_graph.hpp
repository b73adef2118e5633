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

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "arwa/model.hpp"
#include "arwa/relevance.hpp"

namespace arwa {

enum class EdgeStyle { kSolid, kDashed };

/// Directed edge n -> m (n < m) for drive term V_nm, weighted by its relevance.
struct FrameEdge {
  int n = 0;
  int m = 0;
  double weight = 0.0;
  EdgeStyle style = EdgeStyle::kSolid;

  bool operator==(const FrameEdge&) const = default;
};

/// Which component moves when two components are joined.
enum class MergePolicy {
  kShiftHigherEndpoint,  // shift the component containing m
  kShiftLowerEndpoint,   // shift the component containing n
};

/// Integer-labelled graph over eigenstates. Solid edges satisfy k_m - k_n == 1; dashed edges
/// join two vertices of the same component that violate it.
class FrameGraph {
 public:
  explicit FrameGraph(int dim = 0);

  int dim() const { return static_cast<int>(labels_.size()); }
  const std::vector<std::optional<int>>& labels() const { return labels_; }
  std::optional<int> label(int v) const { return labels_.at(v); }
  /// Component id, or -1 for vertices not yet in the graph.
  int component(int v) const { return component_.at(v); }
  const std::vector<FrameEdge>& edges() const { return edges_; }

  /// Labels used for the rotating frame; vertices outside the graph get 0.
  std::vector<int> frame_labels() const;
  int solid_count() const;
  int dashed_count() const;
  std::optional<EdgeStyle> style_of(int n, int m) const;

  /// Adds the next ranked term following the three placement cases; returns the style given.
  EdgeStyle add_term(const RankedTerm& term, MergePolicy policy = MergePolicy::kShiftHigherEndpoint);

  /// Shifts one of the two components so that k_m == k_n + 1 and unifies them. Does not add
  /// the edge. Throws std::logic_error if n and m are unlabeled or already share a component.
  void merge_components(int n, int m, MergePolicy policy = MergePolicy::kShiftHigherEndpoint);

  /// Adds a constant to every assigned label.
  void shift_labels(int k);

 private:
  std::vector<std::optional<int>> labels_;
  std::vector<int> component_;
  std::vector<FrameEdge> edges_;
  int next_component_ = 0;
};

/// Greedy construction in ranking order.
FrameGraph build_graph(const Ranking& ranking, int dim, MergePolicy policy = MergePolicy::kShiftHigherEndpoint);

/// Functional form of FrameGraph::merge_components.
FrameGraph merge_components(FrameGraph graph, int n, int m, MergePolicy policy = MergePolicy::kShiftHigherEndpoint);

/// True iff a closed walk has as many index-increasing steps as index-decreasing ones, i.e. the
/// integer constraint can hold around it. `cycle` lists vertices; the closing step back to
/// cycle.front() is implied. Throws std::invalid_argument if a step is not an edge of the graph.
bool zero_cyclicity_check(const FrameGraph& graph, std::span<const int> cycle);

struct Frame {
  Operator omega;  // w_d * diag(k)
  Operator v0;     // solid-edge drive terms
  Operator h;      // H0 - Omega + V0 + V0^+
};

Frame extract_frame(const FrameGraph& graph, const LindbladModel& model);

/// Writes status and k_shift = k_n - k_m + 1 of every drive term from the graph.
void apply_frame(LindbladModel& model, const FrameGraph& graph);

/// Graphviz digraph: nodes "n (k=k_n)", solid/dashed edges labelled by weight (3 significant digits).
std::string export_dot(const FrameGraph& graph);

}  // namespace arwa
