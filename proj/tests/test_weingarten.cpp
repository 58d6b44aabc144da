// SPDX-License-Identifier: MIT
#include <doctest.h>

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <map>

#include "tcm/error.hpp"
#include "tcm/weingarten.hpp"

using namespace tcm;

namespace {

// Eigenvalues of the matching Gram: one zonal value per partition mu of l/2,
// prod over cells (i, j) of (n + 2j - i), with multiplicity dim of the
// even irreducible representation (not checked here, only the value set).
std::vector<double> zonal_values(int ell, double n) {
  std::vector<double> out;
  for (const auto& mu : partitions(ell / 2)) {
    double v = 1.0;
    for (std::size_t i = 0; i < mu.size(); ++i)
      for (int j = 0; j < mu[i]; ++j) v *= n + 2.0 * j - static_cast<double>(i);
    out.push_back(v);
  }
  std::sort(out.begin(), out.end());
  return out;
}

}  // namespace

TEST_CASE("cycle types of matchings") {
  const auto ms = all_matchings(6);
  CHECK(ms.size() == 15);
  CHECK(ms[0] == Matching::from_pairs(6, {{0, 1}, {2, 3}, {4, 5}}));
  CHECK(cycle_count(cycle_type(ms[0], ms[0])) == 3);
  const auto a = Matching::from_pairs(4, {{0, 1}, {2, 3}});
  const auto b = Matching::from_pairs(4, {{0, 2}, {1, 3}});
  CHECK(code_partition(cycle_type(a, b)) == std::vector<int>{2});
  CHECK(code_partition(cycle_type(a, a)) == std::vector<int>{1, 1});
  CHECK(all_matchings(10).size() == 945);
}

TEST_CASE("l = 4 Weingarten values") {
  for (long n : {2L, 3L, 5L, 11L}) {
    WeingartenTable t(4, n);
    REQUIRE(t.is_exact());
    const Rational den = Rational(n) * (n + 2) * (n - 1);
    const auto one_one = t.class_index(partition_code({1, 1}));
    const auto two = t.class_index(partition_code({2}));
    CHECK((*t.exact_values())[one_one] == Rational(n + 1) / den);
    CHECK((*t.exact_values())[two] == Rational(-1) / den);
  }
}

TEST_CASE("Weingarten inverts the Gram") {
  for (auto [ell, n] : {std::pair{4, 3L}, std::pair{6, 4L}, std::pair{8, 5L}, std::pair{8, 40L}, std::pair{10, 7L}}) {
    const Eigen::MatrixXd g = gram_matrix(ell, n);
    const Eigen::MatrixXd w = weingarten_matrix(WeingartenTable(ell, n));
    const Eigen::MatrixXd prod = g * w;
    const double err = (prod - Eigen::MatrixXd::Identity(g.rows(), g.cols())).cwiseAbs().maxCoeff();
    CHECK_MESSAGE(err < 1e-9, "l=" << ell << " n=" << n << " err=" << err);
  }
}

TEST_CASE("floating and exact tables agree") {
  WeingartenTable exact(8, 9, WeingartenOptions{.exact = true});
  // l = 10 uses floating point by default; compare against a forced exact table.
  WeingartenTable f10(10, 9);
  WeingartenTable e10(10, 9, WeingartenOptions{.exact = true});
  CHECK_FALSE(f10.is_exact());
  for (std::size_t k = 0; k < f10.values().size(); ++k)
    CHECK(f10.values()[k] == doctest::Approx(to_double((*e10.exact_values())[k])).epsilon(1e-9));
  CHECK(exact.is_exact());
}

TEST_CASE("Gram eigenvalues match the zonal product formula") {
  for (auto [ell, n] : {std::pair{4, 3.0}, std::pair{6, 5.0}, std::pair{8, 6.0}, std::pair{4, 1.0}}) {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(gram_matrix(ell, static_cast<long>(n)));
    const auto expected = zonal_values(ell, n);
    std::vector<double> seen;
    for (int i = 0; i < es.eigenvalues().size(); ++i) {
      const double ev = es.eigenvalues()[i];
      bool found = false;
      for (double z : expected) found |= std::abs(ev - z) < 1e-8 * std::max(1.0, std::abs(z));
      CHECK_MESSAGE(found, "eigenvalue " << ev << " at l=" << ell << " n=" << n);
    }
  }
  const auto z4 = zonal_values(4, 7.0);
  CHECK(z4 == std::vector<double>{7.0 * 6.0, 7.0 * 9.0});
}

TEST_CASE("rank deficiency and pseudo-inverse") {
  CHECK_THROWS_AS(WeingartenTable(6, 2), RankDeficientError);
  CHECK_THROWS_AS(WeingartenTable(14, 50), CapacityError);
  WeingartenTable pinv(6, 2, WeingartenOptions{.pseudo_inverse = true});
  const Eigen::MatrixXd g = gram_matrix(6, 2);
  const Eigen::MatrixXd w = weingarten_matrix(pinv);
  CHECK((g * w * g - g).cwiseAbs().maxCoeff() < 1e-9);
  CHECK_THROWS_AS(WeingartenTable(12, 2, WeingartenOptions{.pseudo_inverse = true}), CapacityError);
}

TEST_CASE("Gershgorin diagnostics") {
  WeingartenTable t(6, 100);
  CHECK(t.diagnostics().bound_regime);
  CHECK(t.diagnostics().bound_holds);
  CHECK(t.diagnostics().diagonal == doctest::Approx(1e6));
  WeingartenTable small(6, 5);
  CHECK_FALSE(small.diagnostics().bound_regime);
}

TEST_CASE("graph Weingarten sums") {
  RealizationSpace space(RealizationSpace::Kind::Closed, 2, 3);
  WeingartenTable t(6, 6);
  const Eigen::MatrixXd wg = graph_weingarten_matrix(space, t);
  CHECK((wg - wg.transpose()).cwiseAbs().maxCoeff() < 1e-15);
  const auto exact = graph_weingarten_matrix_exact(space, t);
  for (int i = 0; i < wg.rows(); ++i)
    for (int j = 0; j < wg.cols(); ++j) CHECK(wg(i, j) == doctest::Approx(to_double(exact[i][j])));
  // The fixed realizer of G does not matter.
  for (const auto& gc : space.classes())
    for (const auto& hc : space.classes()) {
      const double a = graph_weingarten(gc.graph, hc.graph, t, 0);
      const double b = graph_weingarten(gc.graph, hc.graph, t, gc.realizations - 1);
      CHECK(a == doctest::Approx(b));
      CHECK(a == doctest::Approx(wg(space.index_of(gc.graph.key()), space.index_of(hc.graph.key()))));
    }
  const auto open = enumerate_open(3, 3);
  WeingartenTable t8(8, 6), t10(10, 6);
  for (const auto& gc : open) {
    CHECK(chopped_graph_weingarten(gc.graph, gc.graph, t8, 0) ==
          doctest::Approx(chopped_graph_weingarten(gc.graph, gc.graph, t8, 1)));
    CHECK(pendant_graph_weingarten(gc.graph, gc.graph, t10, 0) ==
          doctest::Approx(pendant_graph_weingarten(gc.graph, gc.graph, t10, 1)));
  }
  const auto k2 = enumerate_closed(2, 3)[0].graph;
  const auto k4 = enumerate_closed(4, 3)[0].graph;
  CHECK(graph_weingarten(k2, k4, t, 0) == 0.0);
}
