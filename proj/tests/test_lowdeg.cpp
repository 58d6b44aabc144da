// SPDX-License-Identifier: MIT
#include <doctest.h>

#include <cmath>

#include "tcm/combinatorics.hpp"
#include "tcm/contraction.hpp"
#include "tcm/error.hpp"
#include "tcm/lowdeg.hpp"
#include "tcm/matching.hpp"

using namespace tcm;

namespace {

const Multigraph kTriangle = Multigraph::from_edges(2, 3, {{0, 1}, {1, 2}, {0, 2}});

}  // namespace

TEST_CASE("pca beta edge cases and Monte Carlo") {
  const auto frob = Multigraph::from_edges(3, 2, {{0, 1}, {0, 1}, {0, 1}});
  CHECK(pca_beta(frob, 10, 0.0) == 0.0);
  CHECK(pca_beta(Multigraph::empty(3), 10, 0.4) == 1.0);
  SeparationConfig c;
  c.p = 3;
  c.n = 8;
  c.lambda = 0.4;
  c.graphs = {frob};
  c.trials = 4000;
  const SeparationReport rep = separation_experiment(c, SeededRng(5));
  CHECK(rep.predicted == doctest::Approx(pca_beta(frob, 8, 0.4)));
  CHECK(std::abs(rep.z_agreement) <= 4.0);
  c.lambda = 0.0;
  const SeparationReport null = separation_experiment(c, SeededRng(6));
  CHECK(std::abs(null.separation) < 0.15);
}

TEST_CASE("pca advantage basics") {
  CHECK(pca_advantage(3, 16, 0.0, 4).adv2 == doctest::Approx(1.0));
  CHECK(pca_advantage(3, 16, 0.3, 0).adv2 == 1.0);
  const AdvantageReport rep = pca_advantage(3, 16, 0.05, 4);
  CHECK(rep.exact_available);
  CHECK(rep.within_bounds());
  CHECK(rep.degrees.size() == 2);  // d = 2 and d = 4; odd d have no closed graphs at p = 3
  CHECK_FALSE(rep.certified);
  CHECK(certified_degree(3, 200, 3));
  // Monotone in lambda and D.
  CumulantEngine engine(2, 16);
  double prev = 0.0;
  for (int D = 0; D <= 4; ++D) {
    const double a = pca_advantage(engine, 0.1, D).adv2;
    CHECK(a >= prev);
    prev = a;
  }
  const PcaAdvantageCurve curve = pca_advantage_curve(engine, 3);
  CHECK(curve.adv2(0.1) == doctest::Approx(pca_advantage(engine, 0.1, 3).adv2));
  CHECK(curve.adv2(0.2) > curve.adv2(0.1));
  const double cross = curve.crossing(2.0);
  CHECK(curve.adv2(cross) == doctest::Approx(2.0));
  CHECK_THROWS_AS(pca_advantage_curve(engine, 0).crossing(2.0), NumericError);
}

TEST_CASE("degree-1 advantage by hand for p = 2") {
  // d = 1 has only the loop, so Adv^2 = 1 + beta_hat^2 / M with a 1 x 1 Gram M.
  const long n = 12;
  CumulantEngine engine(2, n);
  const CumulantBlock& blk = engine.block(1);
  REQUIRE(blk.size() == 1);
  const double beta = pca_beta(blk.classes[0].graph, n, 0.2) * blk.normalization(0);
  const double expected = 1.0 + beta * beta / blk.gram()(0, 0);
  CHECK(pca_advantage(engine, 0.2, 1).adv2 == doctest::Approx(expected));
}

TEST_CASE("reconstruction bound") {
  const CorrelationReport zero = pca_correlation_bound(3, 16, 0.0, 3);
  CHECK(zero.corr2_bound == 0.0);
  CHECK(zero.mmse_bound == 16.0);
  CHECK_THROWS_AS(pca_correlation_bound(2, 16, 0.1, 3), InputError);
  const CorrelationReport rep = pca_correlation_bound(3, 32, 0.01, 3);
  const Eigen::Index k = rep.R.rows();
  for (Eigen::Index i = 0; i < k; ++i) {
    CHECK(rep.R(i, i) == 1.0);
    for (Eigen::Index j = 0; j < i; ++j) CHECK(rep.R(i, j) == 0.0);
  }
  CHECK((rep.R.transpose() * rep.gamma - rep.beta).norm() < 1e-12 * (1.0 + rep.beta.norm()));
  // D = 1: one graph, a vertex with (p - 1) / 2 loops and the open edge.
  const long n = 64;
  const double lambda = std::pow(n, -0.75);
  const CorrelationReport one = pca_correlation_bound(3, n, lambda, 1);
  REQUIRE(one.keys.size() == 1);
  CHECK(one.corr2_bound == doctest::Approx(2.0 * one.beta[0] * one.beta[0]));
  // Same order as the linear estimator scale lambda^2 n^{(p + 1) / 2} = sqrt(n).
  const double scale = lambda * lambda * std::pow(n, 2.0);
  CHECK(one.corr2_bound / scale > 0.5);
  CHECK(one.corr2_bound / scale < 2.0);
}

TEST_CASE("Wishart beta") {
  const int n = 6;
  const SymmetricTensor a = wishart_like_A(2, n);
  // Direct contraction oracle for the triangle.
  const double direct = falling(n, 3) / std::pow(n, 3) / std::sqrt(100.0) * moment(kTriangle, a);
  CHECK(wishart_beta(kTriangle, 100, a) == doctest::Approx(direct));
  CHECK(wishart_beta(Multigraph::from_edges(2, 1, {{0, 0}}), 100, a) == 0.0);
  CHECK(wishart_beta(Multigraph::from_edges(2, 2, {{0, 1}, {0, 1}}), 100, a) == 0.0);
  CHECK(wishart_beta(Multigraph::empty(2), 100, a) == 1.0);
  SymmetricTensor bad = a;
  bad.set({0, 0}, 1.0);
  CHECK_THROWS_AS(wishart_beta(kTriangle, 100, bad), InputError);
  CHECK_THROWS_AS(validate_wishart_A(2.0 * a), InputError);
  // Agreement with the mixture Monte Carlo.
  SeparationConfig c;
  c.model = PlantedModel::Wishart;
  c.p = 2;
  c.n = n;
  c.r = 20;
  c.graphs = {kTriangle};
  c.trials = 3000;
  const SeparationReport rep = separation_experiment(c, SeededRng(9));
  CHECK(std::abs(rep.z_agreement) <= 4.0);
}

TEST_CASE("Wishart advantage") {
  const int n = 10;
  const SymmetricTensor a = wishart_like_A(2, n);
  CumulantEngine engine(2, n);
  CHECK(wishart_advantage(engine, 100, 2, a).adv2 == 1.0);
  CHECK(wishart_advantage(engine, 1000000000000L, 4, a).adv2 == doctest::Approx(1.0).epsilon(1e-6));
  double prev = 1e300;
  for (long r : {10L, 100L, 1000L}) {
    const AdvantageReport rep = wishart_advantage(engine, r, 3, a);
    CHECK(rep.xi == 3);
    CHECK(rep.adv2 <= prev);
    CHECK(rep.dominant == doctest::Approx(rep.adv2 - 1.0));
    prev = rep.adv2;
  }
  const ScalingFit fit = wishart_scaling_fit(2, {12, 16}, {100, 1000});
  CHECK(fit.r_error() < 1e-9);
  CHECK(fit.n_error() < 0.2);
}
