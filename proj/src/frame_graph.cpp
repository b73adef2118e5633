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

#include "arwa/frame_graph.hpp"

#include <charconv>
#include <sstream>
#include <stdexcept>

namespace arwa {

FrameGraph::FrameGraph(int dim) : labels_(dim), component_(dim, -1) {}

std::vector<int> FrameGraph::frame_labels() const {
  std::vector<int> k(labels_.size(), 0);
  for (std::size_t i = 0; i < labels_.size(); ++i) k[i] = labels_[i].value_or(0);
  return k;
}

int FrameGraph::solid_count() const {
  int c = 0;
  for (const auto& e : edges_) c += e.style == EdgeStyle::kSolid;
  return c;
}

int FrameGraph::dashed_count() const { return static_cast<int>(edges_.size()) - solid_count(); }

std::optional<EdgeStyle> FrameGraph::style_of(int n, int m) const {
  for (const auto& e : edges_) {
    if (e.n == n && e.m == m) return e.style;
  }
  return std::nullopt;
}

void FrameGraph::shift_labels(int k) {
  for (auto& l : labels_) {
    if (l) *l += k;
  }
}

void FrameGraph::merge_components(int n, int m, MergePolicy policy) {
  if (!labels_.at(n) || !labels_.at(m)) throw std::logic_error("merge_components: both vertices must be labeled");
  if (component_[n] == component_[m]) throw std::logic_error("merge_components: vertices share a component");
  int moving = 0;
  int staying = 0;
  int shift = 0;
  if (policy == MergePolicy::kShiftHigherEndpoint) {
    moving = component_[m];
    staying = component_[n];
    shift = *labels_[n] + 1 - *labels_[m];
  } else {
    moving = component_[n];
    staying = component_[m];
    shift = *labels_[m] - 1 - *labels_[n];
  }
  for (int v = 0; v < dim(); ++v) {
    if (component_[v] == moving) {
      *labels_[v] += shift;
      component_[v] = staying;
    }
  }
}

EdgeStyle FrameGraph::add_term(const RankedTerm& term, MergePolicy policy) {
  const int n = term.n;
  const int m = term.m;
  if (n < 0 || m >= dim() || !(n < m)) throw std::invalid_argument("graph edge needs 0 <= n < m < D");
  auto& kn = labels_[n];
  auto& km = labels_[m];
  EdgeStyle style = EdgeStyle::kSolid;
  if (!kn && !km) {
    kn = 0;
    km = 1;
    component_[n] = component_[m] = next_component_++;
  } else if (kn && !km) {
    km = *kn + 1;
    component_[m] = component_[n];
  } else if (!kn && km) {
    kn = *km - 1;
    component_[n] = component_[m];
  } else if (component_[n] != component_[m]) {
    merge_components(n, m, policy);
  } else if (*km != *kn + 1) {
    style = EdgeStyle::kDashed;
  }
  edges_.push_back({n, m, term.relevance, style});
  return style;
}

FrameGraph build_graph(const Ranking& ranking, int dim, MergePolicy policy) {
  FrameGraph g(dim);
  for (const auto& t : ranking.terms) g.add_term(t, policy);
  return g;
}

FrameGraph merge_components(FrameGraph graph, int n, int m, MergePolicy policy) {
  graph.merge_components(n, m, policy);
  return graph;
}

bool zero_cyclicity_check(const FrameGraph& graph, std::span<const int> cycle) {
  const auto has_edge = [&](int a, int b) {
    const int lo = std::min(a, b);
    const int hi = std::max(a, b);
    for (const auto& e : graph.edges()) {
      if (e.n == lo && e.m == hi) return true;
    }
    return false;
  };
  int forward = 0;
  int backward = 0;
  for (std::size_t i = 0; i < cycle.size(); ++i) {
    const int from = cycle[i];
    const int to = cycle[(i + 1) % cycle.size()];
    if (!has_edge(from, to)) throw std::invalid_argument("zero_cyclicity_check: walk leaves the graph");
    if (to > from) {
      ++forward;
    } else {
      ++backward;
    }
  }
  return forward == backward;
}

Frame extract_frame(const FrameGraph& graph, const LindbladModel& model) {
  const int d = model.dim();
  const auto k = graph.frame_labels();
  Frame f;
  f.omega = Operator::Zero(d, d);
  for (int i = 0; i < d; ++i) f.omega(i, i) = model.drive_frequency * k[i];
  f.v0 = Operator::Zero(d, d);
  for (const auto& t : model.drives) {
    if (graph.style_of(t.n, t.m) == EdgeStyle::kSolid) f.v0(t.n, t.m) += t.amplitude;
  }
  f.h = model.hamiltonian() - f.omega + f.v0 + f.v0.adjoint();
  return f;
}

void apply_frame(LindbladModel& model, const FrameGraph& graph) {
  const auto k = graph.frame_labels();
  for (auto& t : model.drives) {
    const auto style = graph.style_of(t.n, t.m);
    t.status = !style ? DriveStatus::kUndecided
                      : (*style == EdgeStyle::kSolid ? DriveStatus::kIncluded : DriveStatus::kExcluded);
    t.k_shift = k[t.n] - k[t.m] + 1;
  }
}

std::string export_dot(const FrameGraph& graph) {
  bool any = !graph.edges().empty();
  for (const auto& l : graph.labels()) any = any || l.has_value();
  if (!any) return "digraph {}\n";

  std::ostringstream os;
  os << "digraph {\n  rankdir=LR;\n";
  for (int v = 0; v < graph.dim(); ++v) {
    if (const auto k = graph.label(v)) os << "  " << v << " [label=\"" << v << " (k=" << *k << ")\"];\n";
  }
  char weight[32];
  for (const auto& e : graph.edges()) {
    const auto res = std::to_chars(weight, weight + sizeof weight, e.weight, std::chars_format::scientific, 2);
    *res.ptr = '\0';
    os << "  " << e.n << " -> " << e.m << " [style=" << (e.style == EdgeStyle::kSolid ? "solid" : "dashed")
       << ", label=\"" << weight << "\"];\n";
  }
  os << "}\n";
  return os.str();
}

}  // namespace arwa
