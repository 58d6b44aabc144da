// SPDX-License-Identifier: MIT
#include <doctest.h>

#include <cmath>

#include "tcm/contraction.hpp"
#include "tcm/error.hpp"
#include "tcm/matching.hpp"
#include "tcm/wigner.hpp"

using namespace tcm;

namespace {

Multigraph cycle(int len) {
  std::vector<std::pair<int, int>> edges;
  for (int v = 0; v < len; ++v) edges.emplace_back(v, (v + 1) % len);
  if (len == 2) edges = {{0, 1}, {0, 1}};
  return Multigraph::from_edges(2, len, edges);
}

}  // namespace

TEST_CASE("even colorings of cycles") {
  const auto c2 = even_colorings(cycle(2));
  CHECK(c2.c_max == 2);
  CHECK(c2.w_max == 1.0);
  for (long n : {1L, 3L, 6L}) CHECK(exact_wigner_moment(cycle(2), n) == doctest::Approx(n * n + n));
  const auto c6 = even_colorings(cycle(6));
  CHECK(c6.c_max == 4);
  CHECK(c6.maximal.size() == 5);
  CHECK(c6.w_max == 5.0);
  const auto c4 = even_colorings(cycle(4));
  CHECK(c4.c_max == 3);
  CHECK(c4.w_max == 2.0);
  // GOE: E tr W^4 = 2n^3 + 5n^2 + 5n.
  CHECK(exact_wigner_moment(cycle(4), 7) == doctest::Approx(2.0 * 343 + 5.0 * 49 + 35));
}

TEST_CASE("even colorings of small p = 3 graphs") {
  const auto frob = Multigraph::from_edges(3, 2, {{0, 1}, {0, 1}, {0, 1}});
  const auto rep = even_colorings(frob);
  CHECK(rep.c_max == 3);
  CHECK(rep.maximal.size() == 1);
  // Odd vertex count with p = 2: a triangle has no even coloring.
  const auto tri = Multigraph::from_edges(2, 3, {{0, 1}, {1, 2}, {0, 2}});
  CHECK(even_colorings(tri).c_max == -1);
  CHECK(exact_wigner_moment(tri, 5) == 0.0);
  // E ||W||_F^2 = sum over multisets of (p! / prod c_j!) * prod c_j! = p! C(n + p - 1, p).
  CHECK(exact_wigner_moment(frob, 5) == doctest::Approx(6.0 * 35.0));
  CHECK_THROWS_AS(even_colorings(cycle(10)), CapacityError);
  CHECK(coloring_weight(frob, {0, 0, 1}) == 2.0);
  CHECK(coloring_weight(frob, {0, 1, 2}) == 1.0);
  CHECK_THROWS_AS(coloring_weight(frob, {0, 1}), InputError);
}

TEST_CASE("switching distance: circuit formula agrees with BFS") {
  const LabeledGraph c4 = cycle(4).graph();
  LabeledGraph f(4);
  f.add_edge(0, 1, 2);
  f.add_edge(2, 3, 2);
  CHECK(switching_distance(c4, c4) == 0);
  CHECK(switching_distance(c4, f) == 1);
  CHECK(switching_distance_bfs(c4, f) == 1);
  const auto single = Multigraph::from_edges(3, 2, {{0, 0}, {0, 1}, {1, 1}});
  const auto frob = Multigraph::from_edges(3, 2, {{0, 1}, {0, 1}, {0, 1}});
  CHECK(switching_distance(single.graph(), frob.graph()) == switching_distance_bfs(single.graph(), frob.graph()));
  CHECK(switching_distance(single.graph(), frob.graph()) == 1);
  LabeledGraph bad(4);
  bad.add_edge(0, 1, 4);
  CHECK_THROWS_AS(switching_distance(c4, bad), InputError);
  // Every pair of labeled graphs on four vertices from the enumerations.
  for (int p : {2, 3})
    for (const auto& a : enumerate_closed(4, p))
      for (const auto& b : enumerate_closed(4, p))
        CHECK(switching_distance(a.graph.graph(), b.graph.graph()) ==
              switching_distance_bfs(a.graph.graph(), b.graph.graph()));
}

TEST_CASE("c_max duality between colorings and switching") {
  for (int p = 1; p <= 6; ++p)
    for (int d = 0; p * d <= 12; d += 2)
      for (const auto& gc : enumerate_closed(d, p)) {
        if (gc.graph.edge_count() > 6) continue;
        const int colorings = even_colorings(gc.graph).c_max;
        CHECK_MESSAGE(colorings == cmax_via_switching(gc.graph), gc.graph.key());
      }
  const auto k4 = Multigraph::from_edges(3, 4, {{0, 1}, {0, 2}, {0, 3}, {1, 2}, {1, 3}, {2, 3}});
  CHECK(cmax_via_switching(k4, SwitchMethod::Bfs) == even_colorings(k4).c_max);
  CHECK(cmax_via_switching(cycle(6)) == 4);
  for (const auto& g : {cycle(4), cycle(6), k4})
    for (const auto& m : even_colorings(g).maximal) CHECK(m.weight == 1.0);
  // Two disjoint triangles: every maximal coloring repeats a color inside one triangle.
  const auto two_tri = Multigraph::from_edges(2, 6, {{0, 1}, {1, 2}, {0, 2}, {3, 4}, {4, 5}, {3, 5}});
  const auto rep = even_colorings(two_tri);
  CHECK(rep.c_max == 3);
  CHECK(cmax_via_switching(two_tri) == 3);
  bool heavier = false;
  for (const auto& m : rep.maximal) heavier = heavier || m.weight > 1.0;
  CHECK(heavier);
  CHECK_THROWS_AS(cmax_via_switching(Multigraph::from_edges(2, 3, {{0, 1}, {1, 2}, {0, 2}})), InputError);
}

TEST_CASE("leading coefficient of the Wigner moment polynomial") {
  for (const auto& gc : enumerate_closed(4, 3)) {
    const auto rep = even_colorings(gc.graph);
    const double n = 1e6;
    const double ratio = exact_wigner_moment(gc.graph, static_cast<long>(n)) / std::pow(n, rep.c_max);
    CHECK(ratio == doctest::Approx(rep.w_max).epsilon(1e-4));
  }
}

TEST_CASE("Monte Carlo Wigner moments match the coloring sums") {
  Engine rng(21);
  std::vector<Multigraph> graphs;
  for (auto [d, p] : {std::pair{2, 2}, std::pair{4, 2}, std::pair{2, 3}, std::pair{4, 1}, std::pair{2, 4}})
    for (const auto& gc : enumerate_closed(d, p)) graphs.push_back(gc.graph);
  const int n = 6, trials = 20000;
  for (const auto& g : graphs) {
    double s = 0, s2 = 0;
    for (int k = 0; k < trials; ++k) {
      const double m = moment(g, sample_wigner(g.p(), n, 1.0, rng));
      s += m;
      s2 += m * m;
    }
    const double mean = s / trials;
    const double se = std::sqrt((s2 / trials - mean * mean) / trials);
    CHECK_MESSAGE(std::abs(mean - exact_wigner_moment(g, n)) <= 5 * se, g.key());
  }
}
