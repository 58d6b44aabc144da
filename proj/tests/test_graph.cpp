// SPDX-License-Identifier: MIT
#include <doctest.h>

#include <algorithm>
#include <map>
#include <numeric>
#include <random>

#include "tcm/combinatorics.hpp"
#include "tcm/error.hpp"
#include "tcm/graph.hpp"
#include "tcm/io.hpp"
#include "tcm/matching.hpp"

using namespace tcm;

namespace {

// Oracle: isomorphism by trying every vertex permutation.
bool isomorphic_bruteforce(const Multigraph& a, const Multigraph& b) {
  if (a.d() != b.d() || a.p() != b.p() || a.is_open() != b.is_open()) return false;
  std::vector<int> perm(a.d());
  std::iota(perm.begin(), perm.end(), 0);
  do {
    if (a.is_open() && perm[a.open_vertex()] != b.open_vertex()) continue;
    bool ok = true;
    for (int u = 0; u < a.d() && ok; ++u)
      for (int v = 0; v < a.d() && ok; ++v) ok = a.mult(u, v) == b.mult(perm[u], perm[v]);
    if (ok) return true;
  } while (std::next_permutation(perm.begin(), perm.end()));
  return false;
}

std::uint64_t aut_bruteforce(const Multigraph& a) {
  std::vector<int> perm(a.d());
  std::iota(perm.begin(), perm.end(), 0);
  std::uint64_t count = 0;
  do {
    if (a.is_open() && perm[a.open_vertex()] != a.open_vertex()) continue;
    bool ok = true;
    for (int u = 0; u < a.d() && ok; ++u)
      for (int v = 0; v < a.d() && ok; ++v) ok = a.mult(u, v) == a.mult(perm[u], perm[v]);
    count += ok;
  } while (std::next_permutation(perm.begin(), perm.end()));
  return count;
}

Multigraph random_relabel(const Multigraph& g, std::mt19937_64& rng) {
  std::vector<int> pos(g.d());
  std::iota(pos.begin(), pos.end(), 0);
  std::shuffle(pos.begin(), pos.end(), rng);
  return Multigraph(g.p(), g.graph().relabeled(pos), g.is_open() ? pos[g.open_vertex()] : -1);
}

}  // namespace

TEST_CASE("multigraph validation and basic counts") {
  const auto frob3 = Multigraph::from_edges(3, 2, {{0, 1}, {0, 1}, {0, 1}});
  CHECK(frob3.edge_count() == 3);
  CHECK(frob3.eaut() == 12);
  CHECK(is_frobenius(frob3));
  CHECK(disjoint_union(frob3, frob3).eaut() == 288);
  const auto loop2 = Multigraph::from_edges(2, 1, {{0, 0}});
  CHECK(loop2.eaut() == 2);
  CHECK_THROWS_AS(Multigraph::from_edges(3, 2, {{0, 1}, {0, 1}}), InputError);
  const auto empty = Multigraph::empty(3);
  CHECK(empty.d() == 0);
  CHECK(empty.eaut() == 1);
  CHECK(decompose(empty).components.empty());
}

TEST_CASE("closed enumeration examples") {
  const auto g23 = enumerate_closed(2, 3);
  REQUIRE(g23.size() == 2);
  const auto g32 = enumerate_closed(3, 2);
  REQUIRE(g32.size() == 3);
  CHECK(enumerate_closed(0, 5).size() == 1);
  CHECK_THROWS_AS(enumerate_closed(3, 3), InputError);
  CHECK_THROWS_AS(enumerate_closed(9, 2, EnumerationLimits{16}), CapacityError);
  // p = 2, d = 3: triangle, 2-cycle plus loop vertex, three loop vertices.
  std::vector<int> loops;
  for (const auto& gc : g32) loops.push_back(gc.graph.graph().loop_count());
  std::sort(loops.begin(), loops.end());
  CHECK(loops == std::vector<int>{0, 1, 3});
}

TEST_CASE("configuration-model identity for pd <= 14") {
  for (int p = 1; p <= 14; ++p)
    for (int d = 0; p * d <= 14; ++d) {
      if ((p * d) % 2) continue;
      BigInt total = 0;
      const BigInt labeled = pow(factorial(p), d) * factorial(d);
      for (const auto& gc : enumerate_closed(d, p)) {
        CHECK(gc.eaut == gc.graph.eaut());
        total += labeled / gc.eaut;
      }
      CHECK_MESSAGE(total == double_factorial(p * d - 1), "p=" << p << " d=" << d);
    }
}

TEST_CASE("open enumeration identity") {
  for (int p = 1; p <= 7; p += 2)
    for (int d = 1; p * d <= 15; d += 2) {
      BigInt total = 0;
      const BigInt labeled = pow(factorial(p), d - 1) * factorial(p - 1) * factorial(d - 1);
      for (const auto& gc : enumerate_open(d, p)) {
        CHECK(gc.graph.is_open());
        CHECK(gc.graph.graph().degree(gc.graph.open_vertex()) == p - 1);
        total += labeled / gc.eaut;
      }
      CHECK_MESSAGE(total == double_factorial(p * d - 2), "p=" << p << " d=" << d);
    }
  const auto one = enumerate_open(1, 3);
  REQUIRE(one.size() == 1);
  CHECK(one[0].graph.graph().loops(0) == 1);
  CHECK_THROWS_AS(enumerate_open(1, 2), InputError);
}

TEST_CASE("pendant closure enumerates the same open classes") {
  for (auto [d, p] : {std::pair{1, 3}, std::pair{3, 3}, std::pair{1, 5}, std::pair{3, 1}}) {
    RealizationSpace chopped(RealizationSpace::Kind::Chopped, d, p);
    RealizationSpace pendant(RealizationSpace::Kind::Pendant, d, p);
    REQUIRE(chopped.classes().size() == pendant.classes().size());
    for (std::size_t k = 0; k < chopped.classes().size(); ++k) {
      CHECK(chopped.classes()[k].graph.key() == pendant.classes()[k].graph.key());
      CHECK(chopped.classes()[k].eaut == pendant.classes()[k].eaut);
    }
  }
}

TEST_CASE("canonical keys agree with the permutation oracle for d <= 6") {
  std::vector<Multigraph> all;
  for (auto [d, p] : {std::pair{2, 3}, std::pair{4, 3}, std::pair{6, 2}, std::pair{5, 2}, std::pair{4, 2},
                      std::pair{3, 4}, std::pair{6, 1}})
    for (const auto& gc : enumerate_closed(d, p)) all.push_back(gc.graph);
  for (auto [d, p] : {std::pair{3, 3}, std::pair{5, 1}, std::pair{1, 5}})
    for (const auto& gc : enumerate_open(d, p)) all.push_back(gc.graph);
  std::mt19937_64 rng(11);
  for (std::size_t i = 0; i < all.size(); ++i) {
    CHECK(all[i].aut() == aut_bruteforce(all[i]));
    const auto shuffled = random_relabel(all[i], rng);
    CHECK(shuffled.key() == all[i].key());
    CHECK(isomorphic_bruteforce(shuffled, all[i]));
    for (std::size_t j = i + 1; j < all.size(); ++j) {
      if (all[i].d() != all[j].d() || all[i].p() != all[j].p()) continue;
      CHECK((all[i].key() == all[j].key()) == isomorphic_bruteforce(all[i], all[j]));
    }
  }
}

TEST_CASE("automorphism group listing") {
  const auto k4 = Multigraph::from_edges(3, 4, {{0, 1}, {0, 2}, {0, 3}, {1, 2}, {1, 3}, {2, 3}});
  auto group = automorphism_group(k4.graph());
  REQUIRE(group.has_value());
  CHECK(group->size() == 24);
  const auto two_frob = disjoint_union(Multigraph::from_edges(2, 2, {{0, 1}, {0, 1}}),
                                       Multigraph::from_edges(2, 2, {{0, 1}, {0, 1}}));
  group = automorphism_group(two_frob.graph());
  REQUIRE(group.has_value());
  CHECK(group->size() == 8);
  for (const auto& perm : *group)
    for (int u = 0; u < 4; ++u)
      for (int v = 0; v < 4; ++v) CHECK(two_frob.mult(u, v) == two_frob.mult(perm[u], perm[v]));
  CHECK_FALSE(automorphism_group(two_frob.graph(), {}, 4).has_value());
}

TEST_CASE("component decomposition") {
  const auto frob = Multigraph::from_edges(2, 2, {{0, 1}, {0, 1}});
  const auto tri = Multigraph::from_edges(2, 3, {{0, 1}, {1, 2}, {0, 2}});
  const auto dec = decompose(disjoint_union(frob, tri));
  REQUIRE(dec.components.size() == 2);
  int frobs = 0;
  for (const auto& c : dec.components) frobs += c.is_frobenius;
  CHECK(frobs == 1);
  CHECK(decompose(tri).components.size() == 1);
  const auto twice = decompose(disjoint_union(frob, frob));
  REQUIRE(twice.components.size() == 1);
  CHECK(twice.components[0].multiplicity == 2);
  CHECK(twice.count() == 2);
  CHECK(count_assignments(disjoint_union(frob, tri), 3) == 9);
  CHECK(count_assignments(Multigraph::empty(2), 7) == 1);
  CHECK(count_assignments(tri, 5) == 5);
}

TEST_CASE("chop and re-attach round trip") {
  for (const auto& gc : enumerate_open(3, 3)) {
    const LabeledGraph c = chop(gc.graph);
    CHECK(c.degree(gc.graph.open_vertex()) == 2);
    CHECK(attach_open(3, c, gc.graph.open_vertex()).key() == gc.graph.key());
  }
  const auto single = Multigraph::from_edges(3, 1, {{0, 0}}, 0);
  CHECK(chop(single).loops(0) == 1);
  CHECK(single.eaut() == 2);
}

TEST_CASE("graph JSON round trip") {
  for (const auto& gc : enumerate_open(3, 3)) {
    const auto back = graph_from_json(graph_to_json(gc.graph));
    CHECK(back.key() == gc.graph.key());
  }
  const auto k = Multigraph::from_edges(2, 1, {{0, 0}});
  CHECK(graph_to_json(k) == R"({"d":1,"edges":[[0,0]],"p":2})");
  CHECK_THROWS_AS(graph_from_json("{\"p\":3}"), InputError);
}

TEST_CASE("class count upper bound") {
  for (auto [d, p] : {std::pair{4, 3}, std::pair{6, 2}, std::pair{2, 5}, std::pair{4, 4}}) {
    const double bound = std::pow(std::exp(p + 1.0) * std::pow(p, -p / 2.0) * std::pow(d, (p - 2) / 2.0), d);
    CHECK(static_cast<double>(enumerate_closed(d, p).size()) <= bound);
  }
}
