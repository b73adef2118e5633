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
#include <random>
#include <regex>
#include <stdexcept>

#include "doctest.h"
#include "oracles.hpp"

#include "arwa/frame_graph.hpp"
#include "arwa/systems.hpp"

using namespace arwa;

namespace {

Ranking ranking_of(std::initializer_list<std::pair<int, int>> pairs) {
  Ranking r;
  double w = static_cast<double>(pairs.size());
  for (const auto& [n, m] : pairs) r.terms.push_back({n, m, w--});
  return r;
}

std::vector<int> labels_of(const FrameGraph& g) {
  std::vector<int> out;
  for (const auto& l : g.labels()) out.push_back(l.value_or(-999));
  return out;
}

std::vector<std::pair<int, int>> edges_with(const FrameGraph& g, EdgeStyle style) {
  std::vector<std::pair<int, int>> out;
  for (const auto& e : g.edges()) {
    if (e.style == style) out.emplace_back(e.n, e.m);
  }
  return out;
}

Ranking random_ranking(std::mt19937_64& rng, int dim) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  Ranking r;
  for (int n = 0; n < dim; ++n) {
    for (int m = n + 1; m < dim; ++m) {
      if (u(rng) < 0.45) r.terms.push_back({n, m, u(rng)});
    }
  }
  std::sort(r.terms.begin(), r.terms.end(),
            [](const RankedTerm& a, const RankedTerm& b) { return a.relevance > b.relevance; });
  return r;
}

int count_matches(const std::string& text, const std::string& pattern) {
  const std::regex re(pattern);
  return static_cast<int>(std::distance(std::sregex_iterator(text.begin(), text.end(), re), std::sregex_iterator()));
}

const Ranking kSixLevel = ranking_of({{0, 1}, {2, 3}, {4, 5}, {0, 4}, {1, 3}, {2, 4}, {3, 4}});

}  // namespace

TEST_CASE("graph build examples") {
  SUBCASE("single term") {
    const FrameGraph g = build_graph(ranking_of({{1, 3}}), 4);
    CHECK(g.label(1) == 0);
    CHECK(g.label(3) == 1);
    CHECK_FALSE(g.label(0).has_value());
    CHECK(g.solid_count() == 1);
    CHECK(g.frame_labels() == std::vector<int>{0, 0, 0, 1});
  }
  SUBCASE("three-level cycle ranked 01, 02, 12") {
    const FrameGraph g = build_graph(ranking_of({{0, 1}, {0, 2}, {1, 2}}), 3);
    CHECK(labels_of(g) == std::vector<int>{0, 1, 1});
    CHECK(g.style_of(0, 1) == EdgeStyle::kSolid);
    CHECK(g.style_of(0, 2) == EdgeStyle::kSolid);
    CHECK(g.style_of(1, 2) == EdgeStyle::kDashed);
  }
  SUBCASE("three-level cycle ranked 01, 12, 02") {
    const FrameGraph g = build_graph(ranking_of({{0, 1}, {1, 2}, {0, 2}}), 3);
    CHECK(labels_of(g) == std::vector<int>{0, 1, 2});
    CHECK(g.style_of(0, 2) == EdgeStyle::kDashed);
  }
  SUBCASE("case (ii) extends downwards from a labeled upper vertex") {
    const FrameGraph g = build_graph(ranking_of({{2, 3}, {1, 3}}), 4);
    CHECK(g.label(1) == 0);
    CHECK(g.label(2) == 0);
    CHECK(g.label(3) == 1);
  }
  SUBCASE("six-level merge example") {
    const FrameGraph g = build_graph(kSixLevel, 6);
    CHECK(labels_of(g) == std::vector<int>{0, 1, 1, 2, 1, 2});
    CHECK(edges_with(g, EdgeStyle::kDashed) == std::vector<std::pair<int, int>>{{2, 4}, {3, 4}});
    CHECK(g.solid_count() == 5);
  }
  SUBCASE("dashed edges are kept with their weights") {
    const FrameGraph g = build_graph(ranking_of({{0, 1}, {0, 2}, {1, 2}}), 3);
    CHECK(g.edges().size() == 3);
    CHECK(g.edges().back().weight == 1.0);
  }
  SUBCASE("invalid edge orientation is rejected") {
    Ranking r;
    r.terms = {{2, 1, 1.0}};
    CHECK_THROWS_AS(build_graph(r, 3), std::invalid_argument);
  }
}

TEST_CASE("merge components") {
  FrameGraph g(6);
  for (const auto& [n, m] : std::vector<std::pair<int, int>>{{0, 1}, {2, 3}, {4, 5}}) g.add_term({n, m, 1.0});
  SUBCASE("linking 0 and 4 up-shifts the (4,5) component") {
    const FrameGraph merged = merge_components(g, 0, 4);
    CHECK(merged.label(4) == 1);
    CHECK(merged.label(5) == 2);
    CHECK(merged.label(0) == 0);
    CHECK(merged.component(4) == merged.component(0));
    CHECK(merged.label(2) == 0);
  }
  SUBCASE("the lower-endpoint policy down-shifts the (0,1) component instead") {
    const FrameGraph merged = merge_components(g, 0, 4, MergePolicy::kShiftLowerEndpoint);
    CHECK(merged.label(0) == -1);
    CHECK(merged.label(1) == 0);
    CHECK(merged.label(4) == 0);
  }
  SUBCASE("a zero shift leaves labels unchanged but unifies components") {
    const FrameGraph zero = merge_components(g, 0, 3);
    CHECK(labels_of(zero) == labels_of(g));
    CHECK(zero.component(0) == zero.component(3));
  }
  SUBCASE("same-component input is a contract violation") {
    CHECK_THROWS_AS(merge_components(g, 0, 1), std::logic_error);
  }
  SUBCASE("unlabeled input is a contract violation") {
    FrameGraph h(3);
    h.add_term({0, 1, 1.0});
    CHECK_THROWS_AS(merge_components(h, 1, 2), std::logic_error);
  }
}

TEST_CASE("zero-cyclicity check") {
  SUBCASE("any 3-cycle fails") {
    const FrameGraph g = build_graph(ranking_of({{0, 1}, {0, 2}, {1, 2}}), 3);
    const std::vector<int> c1{0, 1, 2};
    const std::vector<int> c2{0, 2, 1};
    CHECK_FALSE(zero_cyclicity_check(g, c1));
    CHECK_FALSE(zero_cyclicity_check(g, c2));
  }
  SUBCASE("alternating 4-cycle passes") {
    const FrameGraph alt = build_graph(ranking_of({{0, 1}, {1, 3}, {2, 3}, {0, 2}}), 4);
    const std::vector<int> alt_walk{0, 1, 3, 2};  // up, up, down, down
    CHECK(zero_cyclicity_check(alt, alt_walk));
  }
  SUBCASE("all-forward 4-cycle fails") {
    const FrameGraph g = build_graph(ranking_of({{0, 1}, {1, 2}, {2, 3}, {0, 3}}), 4);
    const std::vector<int> walk{0, 1, 2, 3};  // P = 3, Q = 1 once the closing step 3 -> 0 is counted
    CHECK_FALSE(zero_cyclicity_check(g, walk));
    CHECK(g.dashed_count() == 1);
  }
  SUBCASE("walks must follow edges") {
    const FrameGraph g = build_graph(ranking_of({{0, 1}}), 3);
    const std::vector<int> walk{0, 1, 2};
    CHECK_THROWS_AS(zero_cyclicity_check(g, walk), std::invalid_argument);
  }
}

TEST_CASE("graph invariants on random rankings") {
  std::mt19937_64 rng(12345);
  for (int trial = 0; trial < 200; ++trial) {
    const int d = 2 + trial % 7;
    const Ranking r = random_ranking(rng, d);
    const FrameGraph g = build_graph(r, d);
    const FrameGraph lower = build_graph(r, d, MergePolicy::kShiftLowerEndpoint);

    for (const auto& e : g.edges()) {
      REQUIRE(g.label(e.n).has_value());
      REQUIRE(g.label(e.m).has_value());
      if (e.style == EdgeStyle::kSolid) {
        CHECK(*g.label(e.m) - *g.label(e.n) == 1);
      } else {
        CHECK(*g.label(e.m) - *g.label(e.n) != 1);
      }
    }
    // Labels follow from solid edges alone, up to one constant per component.
    std::vector<int> comp;
    const auto bfs = oracle::solid_component_labels(g, comp);
    for (int v = 0; v < d; ++v) {
      for (int w = 0; w < d; ++w) {
        if (comp[v] == comp[w] && g.label(v) && g.label(w)) CHECK(*g.label(v) - *g.label(w) == bfs[v] - bfs[w]);
      }
    }
    CHECK(oracle::dashed_edges_are_forced(g));

    std::vector<std::pair<int, int>> all;
    for (const auto& t : r.terms) all.emplace_back(t.n, t.m);
    CHECK((g.dashed_count() > 0) == oracle::has_unbalanced_cycle(d, all));

    // Both merge policies give the same styles and labels that differ by a constant per component.
    CHECK(edges_with(g, EdgeStyle::kDashed) == edges_with(lower, EdgeStyle::kDashed));
    for (int v = 0; v < d; ++v) {
      for (int w = 0; w < d; ++w) {
        if (g.label(v) && g.label(w) && g.component(v) == g.component(w)) {
          CHECK(*g.label(v) - *g.label(w) == *lower.label(v) - *lower.label(w));
        }
      }
    }
    // Determinism.
    CHECK(labels_of(build_graph(r, d)) == labels_of(g));
  }
}

TEST_CASE("frame extraction") {
  SUBCASE("driven oscillator gives Omega = w_d a^+a and the detuned displaced Hamiltonian") {
    const double wr = 1.0, wd = 0.97, zeta = 0.05;
    LindbladModel m = driven_oscillator(wr, zeta, wd, 5, 0.1, 0.0);
    Ranking r;
    for (const auto& t : m.drives) r.terms.push_back({t.n, t.m, 1.0 / (t.m)});
    const Frame f = extract_frame(build_graph(r, 5), m);
    const Operator a = m.find_observable("a")->op;
    const Operator n = a.adjoint() * a;
    CHECK((f.omega - wd * n).norm() < 1e-14);
    const Operator expected = (wr - wd) * n + zeta * (a + a.adjoint());
    CHECK((f.h - expected).norm() < 1e-14);
  }
  SUBCASE("resonant three-level frame has k = (0, 1, 2) and drops V02") {
    ThreeLevelParams p;
    p.energies = {0.0, 1.01, 1.99};
    p.omega_d = 1.0;
    p.v01 = 0.02;
    p.v02 = Complex(0.0, 0.01);
    p.v12 = 0.03;
    const LindbladModel m = three_level(p);
    const FrameGraph g = build_graph(ranking_of({{0, 1}, {1, 2}, {0, 2}}), 3);
    const Frame f = extract_frame(g, m);
    Operator expected = Operator::Zero(3, 3);
    expected.diagonal() << 0.0, 1.01 - 1.0, 1.99 - 2.0;
    expected(0, 1) = expected(1, 0) = 0.02;
    expected(1, 2) = expected(2, 1) = 0.03;
    CHECK((f.h - expected).norm() < 1e-14);
    CHECK(f.omega.diagonal().real() == Eigen::Vector3d(0.0, 1.0, 2.0));
    CHECK(f.h.isApprox(f.h.adjoint()));
  }
  SUBCASE("a global label shift moves h by a multiple of the identity") {
    std::mt19937_64 rng(4);
    const LindbladModel m = oracle::random_diagonal_model(rng, 5);
    const FrameGraph g = build_graph(ranking_of({{0, 1}, {2, 3}, {0, 2}, {3, 4}, {1, 4}}), 5);
    FrameGraph shifted = g;
    shifted.shift_labels(3);
    const Frame f0 = extract_frame(g, m);
    const Frame f1 = extract_frame(shifted, m);
    const Operator diff = f1.h - f0.h + 3.0 * m.drive_frequency * Operator::Identity(5, 5);
    CHECK(diff.norm() <= 1e-12 * f0.h.norm());
    const Operator r0 = solve_steady_state(liouvillian(f0.h, m.channels));
    const Operator r1 = solve_steady_state(liouvillian(f1.h, m.channels));
    CHECK((r0 - r1).norm() < 1e-10);
  }
}

TEST_CASE("apply_frame writes statuses and shifts") {
  LindbladModel m;
  m.energies = {0.0, 1.0, 2.0, 3.0};
  m.drive_frequency = 1.0;
  m.drives = {{0, 1, 0.1}, {0, 2, 0.1}, {1, 2, 0.1}, {2, 3, 0.1}};
  const FrameGraph g = build_graph(ranking_of({{0, 1}, {0, 2}, {1, 2}}), 4);
  apply_frame(m, g);
  CHECK(m.drives[0].status == DriveStatus::kIncluded);
  CHECK(m.drives[0].k_shift == 0);
  CHECK(m.drives[2].status == DriveStatus::kExcluded);
  CHECK(m.drives[2].k_shift == 1);  // k = (0, 1, 1)
  CHECK(m.drives[3].status == DriveStatus::kUndecided);
  CHECK(m.drives[3].k_shift == 2);  // vertex 3 is isolated: k_3 = 0
}

TEST_CASE("DOT export") {
  SUBCASE("empty graph") { CHECK(export_dot(FrameGraph(4)) == "digraph {}\n"); }
  SUBCASE("three-level example") {
    const std::string dot = export_dot(build_graph(ranking_of({{0, 1}, {0, 2}, {1, 2}}), 3));
    CHECK(count_matches(dot, R"re(\d+ \[label="\d+ \(k=-?\d+\)"\])re") == 3);
    CHECK(count_matches(dot, "style=solid") == 2);
    CHECK(count_matches(dot, "style=dashed") == 1);
    CHECK(dot.find("label=\"3.00e+00\"") != std::string::npos);
  }
  SUBCASE("six-level example") {
    const std::string dot = export_dot(build_graph(kSixLevel, 6));
    CHECK(count_matches(dot, R"re(\d+ \[label=)re") == 6);
    CHECK(count_matches(dot, "style=solid") == 5);
    CHECK(count_matches(dot, "style=dashed") == 2);
    CHECK(dot.find("3 [label=\"3 (k=2)\"]") != std::string::npos);
  }
}
