// SPDX-License-Identifier: MIT
#include "tcm/weingarten.hpp"

#include <cmath>

#include "tcm/error.hpp"

namespace tcm {

double gram_entry(const Matching& a, const Matching& b, long n) {
  return std::pow(static_cast<double>(n), cycle_count(cycle_type(a, b)));
}

namespace {

// Gaussian elimination over the rationals; throws when singular.
std::vector<Rational> solve_exact(std::vector<std::vector<Rational>> a, std::vector<Rational> rhs) {
  const std::size_t k = rhs.size();
  for (std::size_t col = 0; col < k; ++col) {
    std::size_t piv = col;
    while (piv < k && a[piv][col] == 0) ++piv;
    if (piv == k) throw RankDeficientError("class-collapsed Weingarten system is singular");
    std::swap(a[piv], a[col]);
    std::swap(rhs[piv], rhs[col]);
    for (std::size_t r = 0; r < k; ++r) {
      if (r == col || a[r][col] == 0) continue;
      const Rational f = a[r][col] / a[col][col];
      for (std::size_t c = col; c < k; ++c) a[r][c] -= f * a[col][c];
      rhs[r] -= f * rhs[col];
    }
  }
  for (std::size_t r = 0; r < k; ++r) rhs[r] /= a[r][r];
  return rhs;
}

}  // namespace

WeingartenTable::WeingartenTable(int ell, long n, WeingartenOptions options) : ell_(ell), n_(n) {
  require(ell >= 0 && ell % 2 == 0, "Weingarten table needs an even l");
  require(n >= 1, "dimension n must be positive");
  if (ell > options.max_ell)
    throw CapacityError("l = " + std::to_string(ell) + " exceeds Weingarten guard " + std::to_string(options.max_ell));
  const int half = ell / 2;
  for (const auto& part : partitions(half)) {
    index_.emplace(partition_code(part), static_cast<int>(classes_.size()));
    codes_.push_back(partition_code(part));
    classes_.push_back(part);
  }
  const int k = static_cast<int>(classes_.size());
  const auto matchings = all_matchings(ell);
  const Matching& mu0 = matchings[0];
  const CycleCode identity = partition_code(std::vector<int>(half, 1));

  std::vector<int> cyc0(matchings.size());
  std::vector<int> cls0(matchings.size());
  std::vector<std::size_t> rep(k, matchings.size());
  for (std::size_t v = 0; v < matchings.size(); ++v) {
    const CycleCode c = cycle_type(mu0, matchings[v]);
    cyc0[v] = cycle_count(c);
    cls0[v] = class_index(c);
    if (rep[cls0[v]] == matchings.size()) rep[cls0[v]] = v;
  }

  diag_.diagonal = std::pow(static_cast<double>(n), half);
  for (std::size_t v = 1; v < matchings.size(); ++v) diag_.offdiag_row_sum += std::pow(static_cast<double>(n), cyc0[v]);
  diag_.gershgorin_lower = diag_.diagonal - diag_.offdiag_row_sum;
  diag_.gershgorin_upper = diag_.diagonal + diag_.offdiag_row_sum;
  diag_.bound_regime = static_cast<double>(n) > static_cast<double>(ell) * ell;
  diag_.bound_holds = diag_.offdiag_row_sum <= diag_.diagonal * ell * ell / static_cast<double>(n);

  if (options.pseudo_inverse) {
    if (ell > 10) throw CapacityError("pseudo-inverse mode builds the full Gram; limited to l <= 10");
    pseudo_ = true;
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(gram_matrix(ell, n));
    const auto& ev = es.eigenvalues();
    const double cutoff = options.rank_cutoff * ev.cwiseAbs().maxCoeff();
    Eigen::VectorXd inv = Eigen::VectorXd::Zero(ev.size());
    for (int i = 0; i < ev.size(); ++i)
      if (std::abs(ev[i]) > cutoff) inv[i] = 1.0 / ev[i];
    const Eigen::MatrixXd pinv = es.eigenvectors() * inv.asDiagonal() * es.eigenvectors().transpose();
    values_.assign(k, 0.0);
    for (std::size_t v = 0; v < matchings.size(); ++v) values_[cls0[v]] = pinv(0, static_cast<Eigen::Index>(v));
    return;
  }
  if (2 * n < ell)
    throw RankDeficientError("Gram of matchings is singular for n < l/2 (n = " + std::to_string(n) +
                             ", l = " + std::to_string(ell) + "); use pseudo-inverse mode");

  // Row kappa: sum over nu of G(mu0, nu) Wg(nu, sigma_kappa) = [kappa = identity].
  const bool exact = options.exact || ell <= 8;
  if (exact) {
    std::vector<std::vector<Rational>> a(k, std::vector<Rational>(k, Rational(0)));
    std::vector<BigInt> powers(half + 1, 1);
    for (int c = 1; c <= half; ++c) powers[c] = powers[c - 1] * n;
    for (int r = 0; r < k; ++r)
      for (std::size_t v = 0; v < matchings.size(); ++v)
        a[r][class_index(cycle_type(matchings[v], matchings[rep[r]]))] += Rational(powers[cyc0[v]]);
    std::vector<Rational> rhs(k, Rational(0));
    for (int r = 0; r < k; ++r) rhs[r] = (codes_[r] == identity) ? 1 : 0;
    exact_ = solve_exact(std::move(a), std::move(rhs));
    for (const auto& x : *exact_) values_.push_back(to_double(x));
  } else {
    Eigen::MatrixXd a = Eigen::MatrixXd::Zero(k, k);
    for (int r = 0; r < k; ++r)
      for (std::size_t v = 0; v < matchings.size(); ++v)
        a(r, class_index(cycle_type(matchings[v], matchings[rep[r]]))) += std::pow(static_cast<double>(n), cyc0[v]);
    Eigen::VectorXd rhs = Eigen::VectorXd::Zero(k);
    for (int r = 0; r < k; ++r) rhs[r] = (codes_[r] == identity) ? 1.0 : 0.0;
    Eigen::FullPivLU<Eigen::MatrixXd> lu(a);
    if (lu.rank() < k) throw RankDeficientError("class-collapsed Weingarten system is singular");
    const Eigen::VectorXd w = lu.solve(rhs);
    values_.assign(w.data(), w.data() + k);
  }
}

int WeingartenTable::class_index(CycleCode code) const {
  auto it = index_.find(code);
  if (it == index_.end()) throw InputError("cycle type does not belong to this table");
  return it->second;
}

Rational WeingartenTable::wg_exact(const Matching& a, const Matching& b) const {
  if (!exact_) throw InputError("table was built in floating point");
  return (*exact_)[class_index(cycle_type(a, b))];
}

Eigen::MatrixXd gram_matrix(int ell, long n) {
  const auto ms = all_matchings(ell);
  const auto m = static_cast<Eigen::Index>(ms.size());
  Eigen::MatrixXd g(m, m);
  for (Eigen::Index i = 0; i < m; ++i)
    for (Eigen::Index j = 0; j <= i; ++j) g(i, j) = g(j, i) = gram_entry(ms[i], ms[j], n);
  return g;
}

Eigen::MatrixXd weingarten_matrix(const WeingartenTable& table) {
  const auto ms = all_matchings(table.ell());
  const auto m = static_cast<Eigen::Index>(ms.size());
  Eigen::MatrixXd w(m, m);
  for (Eigen::Index i = 0; i < m; ++i)
    for (Eigen::Index j = 0; j <= i; ++j) w(i, j) = w(j, i) = table.wg(ms[i], ms[j]);
  return w;
}

namespace {

void check_space(const RealizationSpace& space, const WeingartenTable& table) {
  require(space.ell() == table.ell(), "Weingarten table size does not match the half-edge count");
  require(space.matchings().size() == space.matching_count(), "realization space was built without matchings");
}

std::vector<std::size_t> first_realizers(const RealizationSpace& space) {
  std::vector<std::size_t> first(space.classes().size(), space.matchings().size());
  for (std::size_t v = 0; v < space.matchings().size(); ++v) {
    const int c = space.class_of_matching()[v];
    if (first[c] == space.matchings().size()) first[c] = v;
  }
  return first;
}

}  // namespace

Eigen::MatrixXd graph_weingarten_matrix(const RealizationSpace& space, const WeingartenTable& table) {
  check_space(space, table);
  const auto k = static_cast<Eigen::Index>(space.classes().size());
  const auto first = first_realizers(space);
  Eigen::MatrixXd out = Eigen::MatrixXd::Zero(k, k);
  const auto& ms = space.matchings();
  for (Eigen::Index g = 0; g < k; ++g) {
    for (std::size_t v = 0; v < ms.size(); ++v) out(g, space.class_of_matching()[v]) += table.wg(ms[first[g]], ms[v]);
    out.row(g) *= static_cast<double>(space.classes()[g].realizations);
  }
  return out;
}

std::vector<std::vector<Rational>> graph_weingarten_matrix_exact(const RealizationSpace& space,
                                                                 const WeingartenTable& table) {
  check_space(space, table);
  const std::size_t k = space.classes().size();
  const auto first = first_realizers(space);
  std::vector<std::vector<Rational>> out(k, std::vector<Rational>(k, Rational(0)));
  const auto& ms = space.matchings();
  for (std::size_t g = 0; g < k; ++g) {
    for (std::size_t v = 0; v < ms.size(); ++v) out[g][space.class_of_matching()[v]] += table.wg_exact(ms[first[g]], ms[v]);
    for (auto& x : out[g]) x *= Rational(space.classes()[g].realizations);
  }
  return out;
}

namespace {

double single_entry(RealizationSpace::Kind kind, const Multigraph& g, const Multigraph& h,
                    const WeingartenTable& table, std::size_t mu0_choice) {
  require(g.p() == h.p(), "graphs with different p");
  if (g.d() != h.d()) return 0.0;
  RealizationSpace space(kind, g.d(), g.p(), EnumerationLimits{table.ell() > 16 ? table.ell() : 16});
  check_space(space, table);
  const int gi = space.index_of(g.key());
  const int hi = space.index_of(h.key());
  require(gi >= 0 && hi >= 0, "graph does not belong to the realization space");
  const auto& ms = space.matchings();
  std::size_t seen = 0;
  std::size_t mu0 = ms.size();
  for (std::size_t v = 0; v < ms.size() && mu0 == ms.size(); ++v)
    if (space.class_of_matching()[v] == gi && seen++ == mu0_choice) mu0 = v;
  require(mu0 < ms.size(), "realizer index out of range");
  double sum = 0.0;
  for (std::size_t v = 0; v < ms.size(); ++v)
    if (space.class_of_matching()[v] == hi) sum += table.wg(ms[mu0], ms[v]);
  return sum * static_cast<double>(space.classes()[gi].realizations);
}

}  // namespace

double graph_weingarten(const Multigraph& g, const Multigraph& h, const WeingartenTable& table,
                        std::size_t mu0_choice) {
  require(!g.is_open() && !h.is_open(), "graph_weingarten takes closed graphs");
  return single_entry(RealizationSpace::Kind::Closed, g, h, table, mu0_choice);
}

double chopped_graph_weingarten(const Multigraph& g, const Multigraph& h, const WeingartenTable& table,
                                std::size_t mu0_choice) {
  require(g.is_open() && h.is_open(), "chopped_graph_weingarten takes 1-open graphs");
  return single_entry(RealizationSpace::Kind::Chopped, g, h, table, mu0_choice);
}

double pendant_graph_weingarten(const Multigraph& g, const Multigraph& h, const WeingartenTable& table,
                                std::size_t mu0_choice) {
  require(g.is_open() && h.is_open(), "pendant_graph_weingarten takes 1-open graphs");
  return single_entry(RealizationSpace::Kind::Pendant, g, h, table, mu0_choice);
}

}  // namespace tcm
