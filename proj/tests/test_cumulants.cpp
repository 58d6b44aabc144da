// SPDX-License-Identifier: MIT
#include <doctest.h>

#include <cmath>

#include "tcm/combinatorics.hpp"
#include "tcm/cumulants.hpp"
#include "tcm/error.hpp"

using namespace tcm;

namespace {

Multigraph frobenius(int p) {
  return Multigraph::from_edges(p, 2, std::vector<std::pair<int, int>>(p, {0, 1}));
}

Multigraph two_frobenius(int p) {
  std::vector<std::pair<int, int>> e(p, {0, 1});
  for (int k = 0; k < p; ++k) e.push_back({2, 3});
  return Multigraph::from_edges(p, 4, e);
}

}  // namespace

TEST_CASE("exact cumulants agree with Haar Monte Carlo") {
  Engine rng(3);
  for (auto [p, d, n] : {std::tuple{2, 2, 5}, std::tuple{3, 2, 6}, std::tuple{2, 3, 5}}) {
    CumulantEngine engine(p, n);
    const SymmetricTensor t = sample_wigner(p, n, 1.0, rng);
    for (const auto& gc : enumerate_closed(d, p)) {
      const double exact = engine.kappa(gc.graph, t);
      CHECK(cumulant_exact(gc.graph, t, engine.table(p * d)) == doctest::Approx(exact));
      const McEstimate mc = cumulant_mc(gc.graph, t, 4000, SeededRng(11));
      CHECK_MESSAGE(std::abs(mc.z(exact)) <= 5.0, gc.graph.key());
    }
  }
  // kappa_empty = 1, and the table size must match.
  CumulantEngine engine(3, 6);
  const SymmetricTensor t = sample_wigner(3, 6, 1.0, rng);
  CHECK(engine.kappa(Multigraph::empty(3), t) == 1.0);
  CHECK_THROWS_AS(cumulant_exact(frobenius(3), t, engine.table(4)), InputError);
}

TEST_CASE("cumulants are invariant under change of basis") {
  Engine rng(5);
  CumulantEngine engine(3, 5);
  const SymmetricTensor t = sample_wigner(3, 5, 1.0, rng);
  const SymmetricTensor u = conjugate(sample_haar(5, rng), t);
  const Eigen::VectorXd a = engine.kappa_block(2, t), b = engine.kappa_block(2, u);
  for (Eigen::Index i = 0; i < a.size(); ++i) CHECK(b[i] == doctest::Approx(a[i]).epsilon(1e-9));
}

TEST_CASE("spike cumulants have the closed form") {
  Engine rng(7);
  for (int p : {2, 3})
    for (long n : {4L, 7L}) {
      CumulantEngine engine(p, n);
      const Eigen::VectorXd v = sample_sphere(static_cast<int>(n), 3.0, rng);
      const SymmetricTensor s = 0.7 * rank_one(v, p);
      for (int d = 1; d <= 3; ++d) {
        if ((p * d) % 2) continue;
        for (const auto& gc : enumerate_closed(d, p))
          CHECK(engine.kappa(gc.graph, s) == doctest::Approx(spike_cumulant(gc.graph, n, 3.0, 0.7)).epsilon(1e-9));
      }
    }
  // p = 2, the 2-cycle, n = 4, ||v||^2 = 4: 16 * (4 * 3) / (6 * 4) lambda^2 = 8 lambda^2.
  CHECK(spike_cumulant(frobenius(2), 4, 4.0, 0.5) == doctest::Approx(8.0 * 0.25));
  CHECK(spike_cumulant(Multigraph::empty(2), 4, 4.0, 0.5) == 1.0);
}

TEST_CASE("centered cumulants follow the component-subset expansion") {
  Engine rng(9);
  const long n = 6;
  CumulantEngine engine(3, n);
  const SymmetricTensor t = sample_wigner(3, n, 1.0, rng);
  const Multigraph f = frobenius(3);
  const Multigraph ff = two_frobenius(3);
  // One Frobenius pair: kappa - n^{underline 3}.
  CHECK(engine.centered(f, t) == doctest::Approx(engine.kappa(f, t) - falling(n, 3)));
  // Two pairs, x = -1 on each: kappa_FF - 2 (n - 3)^{underline 3} kappa_F + n^{underline 6}.
  const double hand = engine.kappa(ff, t) - 2.0 * falling(n - 3, 3) * engine.kappa(f, t) + falling(n, 6);
  CHECK(engine.centered(ff, t) == doctest::Approx(hand));
  // A general center vector.
  const double x0 = 0.3, x1 = -2.0;
  const double general = engine.kappa(ff, t) + (x0 + x1) * falling(n - 3, 3) * engine.kappa(f, t) +
                         x0 * x1 * falling(n, 6);
  CHECK(engine.centered(ff, t, {x0, x1}) == doctest::Approx(general));
  // Haar Monte Carlo of the centered estimator.
  const McEstimate mc = cumulant_mc(ff, t, default_centers(ff), 4000, SeededRng(2));
  CHECK(std::abs(mc.z(hand)) <= 5.0);
  CHECK_THROWS_AS(engine.centered(ff, t, {1.0}), InputError);
}

TEST_CASE("Wigner inner products of centered cumulants") {
  const int p = 2, n = 6, trials = 20000;
  CumulantEngine engine(p, n);
  const CumulantBlock& blk = engine.block(2);
  const int k = blk.size();
  Eigen::MatrixXd sum = Eigen::MatrixXd::Zero(k, k), sum2 = Eigen::MatrixXd::Zero(k, k);
  Eigen::VectorXd mean = Eigen::VectorXd::Zero(k);
  const SeededRng rng(4);
  for (int trial = 0; trial < trials; ++trial) {
    Engine e = rng.engine(trial);
    const SymmetricTensor w = sample_wigner(p, n, 1.0, e);
    Eigen::VectorXd c(k);
    for (int i = 0; i < k; ++i) c[i] = engine.centered(blk.classes[i].graph, w);
    mean += c;
    const Eigen::MatrixXd outer = c * c.transpose();
    sum += outer;
    sum2 += outer.cwiseProduct(outer);
  }
  const Eigen::MatrixXd expected = blk.inner();
  for (int i = 0; i < k; ++i)
    for (int j = 0; j < k; ++j) {
      const double m = sum(i, j) / trials;
      const double se = std::sqrt((sum2(i, j) / trials - m * m) / trials);
      CHECK(std::abs(m - expected(i, j)) <= 5.0 * se);
    }
  CHECK(engine.inner(blk.classes[0].graph, Multigraph::from_edges(2, 3, {{0, 1}, {1, 2}, {0, 2}})) == 0.0);
  CHECK(engine.inner(Multigraph::empty(2), Multigraph::empty(2)) == 1.0);
}

TEST_CASE("normalized Gram blocks are well conditioned for large n") {
  CumulantEngine engine(2, 200);
  for (int d = 1; d <= 4; ++d) {
    const CumulantGram gram = build_gram(engine, d);
    CHECK(gram.matrix.isApprox(gram.matrix.transpose(), 1e-12));
    CHECK(gram.eigenvalues.minCoeff() >= 0.5);
    CHECK(gram.eigenvalues.maxCoeff() <= 2.0);
    // Diagonal entries tend to 1.
    for (Eigen::Index i = 0; i < gram.matrix.rows(); ++i) CHECK(std::abs(gram.matrix(i, i) - 1.0) < 0.2);
  }
  CumulantEngine open(3, 200);
  for (BasisKind kind : {BasisKind::OpenPendant, BasisKind::OpenChopped}) {
    const CumulantGram gram = build_gram(open, 1, kind);
    CHECK(gram.eigenvalues.size() == 1);
    CHECK(gram.eigenvalues[0] == doctest::Approx(1.0).epsilon(0.05));
  }
  CHECK_THROWS_AS(engine.block(1, BasisKind::OpenPendant), InputError);
  CHECK_THROWS_AS(CumulantEngine(3, 10).block(1), InputError);
}

TEST_CASE("open cumulants agree with Monte Carlo under both policies") {
  Engine rng(13);
  const int p = 3, n = 5;
  CumulantEngine engine(p, n);
  const SymmetricTensor t = sample_wigner(p, n, 1.0, rng);
  for (auto policy : {OpenIndexPolicy::Distinct, OpenIndexPolicy::Free})
    for (const auto& gc : enumerate_open(1, p)) {
      const Eigen::VectorXd exact = engine.open_kappa(gc.graph, t, policy);
      const McVector mc = open_cumulant_mc(gc.graph, t, default_centers(gc.graph), policy, 4000, SeededRng(8));
      CHECK(mc.max_abs_z(exact) <= 5.0);
    }
  // Equivariance: kappa(Q.T) = Q^T kappa(T).
  const Eigen::MatrixXd q = sample_haar(n, rng);
  const auto g = enumerate_open(1, p)[0].graph;
  const Eigen::VectorXd a = engine.open_kappa(g, t, OpenIndexPolicy::Distinct);
  const Eigen::VectorXd b = engine.open_kappa(g, conjugate(q, t), OpenIndexPolicy::Distinct);
  CHECK((b - q.transpose() * a).norm() < 1e-9 * (1.0 + a.norm()));
}

TEST_CASE("additivity under free convolution") {
  Engine rng(17);
  const int p = 2, n = 5;
  CumulantEngine engine(p, n);
  const SymmetricTensor a = sample_wigner(p, n, 1.0, rng);
  const SymmetricTensor b = sample_wigner(p, n, 1.0, rng);
  const Multigraph tri = Multigraph::from_edges(2, 3, {{0, 1}, {1, 2}, {0, 2}});
  const AdditivityReport conn = verify_additivity(tri, a, b, 4000, SeededRng(1), engine);
  CHECK(conn.connected);
  CHECK(conn.predicted == doctest::Approx(engine.kappa(tri, a) + engine.kappa(tri, b)));
  CHECK(std::abs(conn.z) <= 5.0);
  const Multigraph split = Multigraph::from_edges(2, 4, {{0, 1}, {0, 1}, {2, 2}, {3, 3}});
  const AdditivityReport disc = verify_additivity(split, a, b, 4000, SeededRng(2), engine);
  CHECK_FALSE(disc.connected);
  CHECK(std::abs(disc.z) <= 5.0);
}
