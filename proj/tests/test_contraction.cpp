// SPDX-License-Identifier: MIT
#include <doctest.h>

#include <algorithm>
#include <cmath>

#include "tcm/contraction.hpp"
#include "tcm/error.hpp"
#include "tcm/matching.hpp"

using namespace tcm;

namespace {

struct Naive {
  double free_sum = 0;      // all labelings
  double centered_sum = 0;  // injective labelings, centered components
};

// Oracle: enumerate every labeling of the closed edges (and the open leg).
Naive naive_sum(const Multigraph& g, const SymmetricTensor& t, const CenterVector& x, int open_label,
                bool open_distinct) {
  const int n = t.n();
  const auto edges = g.graph().edges();
  const int b = static_cast<int>(edges.size());
  const auto comps = component_vertex_sets(g);
  std::vector<int> label(b, 0);
  Naive out;
  while (true) {
    std::vector<std::vector<int>> idx(g.d());
    for (int e = 0; e < b; ++e) {
      idx[edges[e].first].push_back(label[e]);
      idx[edges[e].second].push_back(label[e]);
    }
    if (open_label >= 0) idx[g.open_vertex()].push_back(open_label);
    std::vector<double> val(g.d());
    for (int v = 0; v < g.d(); ++v) val[v] = t.at(idx[v]);
    double prod = 1.0;
    for (double v : val) prod *= v;
    out.free_sum += prod;
    std::vector<int> all = label;
    if (open_label >= 0 && open_distinct) all.push_back(open_label);
    std::sort(all.begin(), all.end());
    if (std::adjacent_find(all.begin(), all.end()) == all.end()) {
      double c = 1.0;
      for (std::size_t k = 0; k < comps.size(); ++k) {
        double pc = 1.0;
        bool open_comp = false;
        for (int v : comps[k]) {
          pc *= val[v];
          open_comp |= g.is_open() && v == g.open_vertex();
        }
        c *= pc + (open_comp ? 0.0 : x[k]);
      }
      out.centered_sum += c;
    }
    int k = b - 1;
    while (k >= 0 && ++label[k] == n) label[k--] = 0;
    if (k < 0) break;
  }
  return out;
}

std::vector<Multigraph> sample_graphs() {
  std::vector<Multigraph> out;
  for (auto [d, p] : {std::pair{2, 3}, std::pair{4, 3}, std::pair{3, 2}, std::pair{4, 2}, std::pair{2, 1}})
    for (const auto& gc : enumerate_closed(d, p)) out.push_back(gc.graph);
  const auto frob = Multigraph::from_edges(2, 2, {{0, 1}, {0, 1}});
  const auto tri = Multigraph::from_edges(2, 3, {{0, 1}, {1, 2}, {0, 2}});
  out.push_back(disjoint_union(frob, frob));
  out.push_back(disjoint_union(frob, tri));
  return out;
}

}  // namespace

TEST_CASE("closed moments match the naive sum") {
  Engine rng(5);
  for (const auto& g : sample_graphs()) {
    const int n = g.graph().edge_count() > 5 ? 3 : 4;
    const auto t = sample_wigner(g.p(), n, 1.0, rng);
    CenterVector x(component_vertex_sets(g).size());
    for (std::size_t k = 0; k < x.size(); ++k) x[k] = 0.3 - 0.7 * static_cast<double>(k);
    const Naive ref = naive_sum(g, t, x, -1, false);
    CHECK(moment(g, t) == doctest::Approx(ref.free_sum).epsilon(1e-10));
    CHECK(centered_moment(g, t, x) == doctest::Approx(ref.centered_sum).epsilon(1e-10));
    CHECK(DistinctSum(g, x, false).closed(t.dense()) == doctest::Approx(ref.centered_sum).epsilon(1e-10));
    const Naive plain = naive_sum(g, t, CenterVector(x.size(), 0.0), -1, false);
    CHECK(distinct_moment(g, t) == doctest::Approx(plain.centered_sum).epsilon(1e-10));
  }
}

TEST_CASE("symmetric orbit enumeration agrees with the plain one") {
  Engine rng(9);
  const auto frob = Multigraph::from_edges(3, 2, {{0, 1}, {0, 1}, {0, 1}});
  for (const auto& gc : enumerate_closed(4, 3)) {
    const auto t = sample_wigner(3, 7, 1.0, rng).dense();
    const auto x = default_centers(gc.graph);
    DistinctSum sym(gc.graph, x, true);
    CHECK(sym.symmetry_factor() >= 1.0);
    CHECK(sym.closed(t) == doctest::Approx(DistinctSum(gc.graph, x, false).closed(t)).epsilon(1e-10));
  }
  const auto two = disjoint_union(frob, frob);
  const auto t = sample_wigner(3, 6, 1.0, rng).dense();
  // Unequal centers break the swap of the two components.
  const CenterVector x{-1.0, 0.5};
  CHECK(DistinctSum(two, x, true).closed(t) == doctest::Approx(DistinctSum(two, x, false).closed(t)).epsilon(1e-10));
  CHECK(DistinctSum(two, x, true).symmetry_factor() == 36.0);
  CHECK(DistinctSum(two, {-1.0, -1.0}, true).symmetry_factor() == 72.0);
}

TEST_CASE("open moments match the naive sum under both index policies") {
  Engine rng(13);
  std::vector<Multigraph> graphs;
  for (int d : {1, 3})
    for (const auto& gc : enumerate_open(d, 3)) graphs.push_back(gc.graph);
  graphs.push_back(disjoint_union(Multigraph::from_edges(3, 1, {{0, 0}}, 0),
                                  Multigraph::from_edges(3, 2, {{0, 1}, {0, 1}, {0, 1}})));
  for (const auto& g : graphs) {
    const int n = 4;
    const auto t = sample_wigner(3, n, 1.0, rng);
    const auto x = default_centers(g);
    const Eigen::VectorXd full = open_moment(g, t);
    const Eigen::VectorXd dist = open_centered_moment(g, t, x, OpenIndexPolicy::Distinct);
    const Eigen::VectorXd free = open_centered_moment(g, t, x, OpenIndexPolicy::Free);
    for (int i = 0; i < n; ++i) {
      CHECK(full[i] == doctest::Approx(naive_sum(g, t, x, i, true).free_sum).epsilon(1e-10));
      CHECK(dist[i] == doctest::Approx(naive_sum(g, t, x, i, true).centered_sum).epsilon(1e-10));
      CHECK(free[i] == doctest::Approx(naive_sum(g, t, x, i, false).centered_sum).epsilon(1e-10));
    }
  }
}

TEST_CASE("mixed moments and contraction plans") {
  Engine rng(17);
  const auto a = sample_wigner(2, 5, 1.0, rng).dense();
  const auto b = sample_wigner(2, 5, 1.0, rng).dense();
  // Triangle with A, B, A: tr(ABA).
  LabeledGraph tri(3);
  tri.add_edge(0, 1);
  tri.add_edge(1, 2);
  tri.add_edge(0, 2);
  Eigen::Map<const Eigen::Matrix<double, 5, 5, Eigen::RowMajor>> ma(a.data.data()), mb(b.data.data());
  CHECK(mixed_moment(tri, {&a, &b, &a}) == doctest::Approx((ma * mb * ma).trace()));
  const auto plan = plan_contraction(tri, {}, 5);
  CHECK(plan.steps.size() == 2);
  CHECK(plan.output_legs.empty());
  CHECK_THROWS_AS(mixed_moment(tri, {&a, &b}), InputError);
  const auto t3 = sample_wigner(3, 4, 1.0, rng).dense();
  CHECK_THROWS_AS(mixed_moment(tri, {&a, &b, &t3}), InputError);
}

TEST_CASE("moment of the empty graph and centers") {
  Engine rng(3);
  const auto t = sample_wigner(3, 4, 1.0, rng);
  CHECK(moment(Multigraph::empty(3), t) == 1.0);
  const auto frob = Multigraph::from_edges(3, 2, {{0, 1}, {0, 1}, {0, 1}});
  CHECK(default_centers(frob) == CenterVector{-1.0});
  CHECK(wishart_centers(frob, 4) == CenterVector{-0.25});
  CHECK(moment(frob, t) == doctest::Approx(t.frobenius_squared()));
}
