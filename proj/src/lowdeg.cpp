// SPDX-License-Identifier: MIT
#include "tcm/lowdeg.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <map>

#include "tcm/combinatorics.hpp"
#include "tcm/contraction.hpp"
#include "tcm/error.hpp"
#include "tcm/matching.hpp"

namespace tcm {

bool certified_degree(int p, long n, int D) {
  return static_cast<double>(D) <= std::sqrt(static_cast<double>(n) / (2.0 * p * p));
}

namespace {

// Relative eigenvalue floor below which a Gram block counts as singular.
constexpr double kSingular = 1e-10;

// Fills exact and bound terms of one degree from unnormalized betas.
DegreeTerm degree_term(const CumulantBlock& blk, const Eigen::VectorXd& raw_beta) {
  DegreeTerm term;
  term.d = blk.d;
  term.beta.resize(blk.size());
  for (int i = 0; i < blk.size(); ++i) {
    term.keys.push_back(blk.classes[i].graph.key());
    term.beta[i] = blk.normalization(i) * raw_beta[i];
    term.bound += raw_beta[i] * raw_beta[i] / static_cast<double>(blk.classes[i].eaut);
  }
  term.bound *= std::pow(static_cast<double>(blk.n), -0.5 * blk.p * blk.d);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(blk.gram());
  const auto& ev = es.eigenvalues();
  term.min_eig = ev.minCoeff();
  term.max_eig = ev.maxCoeff();
  if (term.min_eig <= kSingular * std::max(term.max_eig, 1.0)) {
    term.singular = true;
    return term;
  }
  const Eigen::VectorXd proj = es.eigenvectors().transpose() * term.beta;
  term.exact = (proj.array().square() / ev.array()).sum();
  return term;
}

void finish(AdvantageReport& rep) {
  rep.adv2 = 1.0;
  rep.bound = 1.0;
  for (const auto& t : rep.degrees) {
    rep.bound += t.bound;
    if (t.singular) rep.exact_available = false;
    rep.adv2 += t.exact;
  }
  if (!rep.exact_available) rep.adv2 = rep.bound;
}

bool has_closed_graphs(int p, int d) { return (p * d) % 2 == 0; }

}  // namespace

double pca_beta(const Multigraph& g, long n, double lambda) {
  require(!g.is_open(), "pca_beta takes a closed graph");
  return spike_cumulant(g, n, static_cast<double>(n), lambda);
}

AdvantageReport pca_advantage(int p, long n, double lambda, int D) {
  CumulantEngine engine(p, n);
  return pca_advantage(engine, lambda, D);
}

AdvantageReport pca_advantage(CumulantEngine& engine, double lambda, int D) {
  require(D >= 0, "degree must be non-negative");
  require(lambda >= 0, "spike strength must be non-negative");
  AdvantageReport rep;
  rep.model = "pca";
  rep.p = engine.p();
  rep.n = engine.n();
  rep.D = D;
  rep.lambda = lambda;
  rep.certified = certified_degree(rep.p, rep.n, D);
  for (int d = 1; d <= D; ++d) {
    if (!has_closed_graphs(rep.p, d)) continue;
    const CumulantBlock& blk = engine.block(d);
    Eigen::VectorXd raw(blk.size());
    for (int i = 0; i < blk.size(); ++i) raw[i] = pca_beta(blk.classes[i].graph, rep.n, lambda);
    rep.degrees.push_back(degree_term(blk, raw));
  }
  finish(rep);
  return rep;
}

double PcaAdvantageCurve::adv2(double lambda) const {
  if (!exact_available) return bound(lambda);
  double out = 1.0;
  for (std::size_t k = 0; k < degrees.size(); ++k) out += std::pow(lambda, 2 * degrees[k]) * exact_weight[k];
  return out;
}

double PcaAdvantageCurve::bound(double lambda) const {
  double out = 1.0;
  for (std::size_t k = 0; k < degrees.size(); ++k) out += std::pow(lambda, 2 * degrees[k]) * bound_weight[k];
  return out;
}

double PcaAdvantageCurve::crossing(double level) const {
  require(level > 1.0, "crossing level must exceed 1");
  double total = 0.0;
  for (std::size_t k = 0; k < degrees.size(); ++k) total += exact_available ? exact_weight[k] : bound_weight[k];
  if (total <= 0.0) throw NumericError("advantage does not depend on lambda at this degree");
  double lo = 0.0, hi = 1.0;
  while (adv2(hi) < level) {
    lo = hi;
    hi *= 2.0;
  }
  for (int it = 0; it < 200 && hi - lo > 1e-14 * hi; ++it) {
    const double mid = 0.5 * (lo + hi);
    (adv2(mid) < level ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi);
}

PcaAdvantageCurve pca_advantage_curve(CumulantEngine& engine, int D) {
  const AdvantageReport unit = pca_advantage(engine, 1.0, D);
  PcaAdvantageCurve curve;
  curve.p = unit.p;
  curve.n = unit.n;
  curve.D = D;
  curve.exact_available = unit.exact_available;
  for (const auto& t : unit.degrees) {
    curve.degrees.push_back(t.d);
    curve.exact_weight.push_back(t.exact);
    curve.bound_weight.push_back(t.bound);
  }
  return curve;
}

CorrelationReport pca_correlation_bound(int p, long n, double lambda, int D) {
  if (p % 2 == 0) throw InputError("reconstruction needs odd p; the sign of v is not identifiable for even p");
  require(D >= 1, "degree must be at least 1");
  require(lambda >= 0, "spike strength must be non-negative");
  CorrelationReport rep;
  rep.p = p;
  rep.n = n;
  rep.D = D;
  rep.lambda = lambda;
  rep.certified = certified_degree(p, n, D);
  std::vector<GraphClass> graphs;
  for (int d = 1; d <= D; d += 2)
    for (auto& gc : enumerate_open(d, p)) graphs.push_back(std::move(gc));
  const int k = static_cast<int>(graphs.size());
  std::map<std::string, int> index;
  for (int i = 0; i < k; ++i) {
    rep.keys.push_back(graphs[i].graph.key());
    index.emplace(graphs[i].graph.key(), i);
  }
  const double dn = static_cast<double>(n);
  // n^{3b/2} / (n + 2b - 2)^{double underline b}.
  auto spike_factor = [&](int b) { return b == 0 ? 1.0 : std::pow(dn, 1.5 * b) / double_falling_d(dn + 2.0 * b - 2.0, b); };
  rep.beta.resize(k);
  for (int i = 0; i < k; ++i) {
    const auto& g = graphs[i].graph;
    rep.beta[i] =
        spike_factor(g.edge_count()) * std::pow(lambda, g.d()) / std::sqrt(static_cast<double>(graphs[i].eaut));
  }
  rep.R = Eigen::MatrixXd::Identity(k, k);
  for (int h = 0; h < k; ++h) {
    const Multigraph& hg = graphs[h].graph;
    const auto comps = component_vertex_sets(hg);
    std::vector<int> closed;
    for (int c = 0; c < static_cast<int>(comps.size()); ++c)
      if (std::find(comps[c].begin(), comps[c].end(), hg.open_vertex()) == comps[c].end()) closed.push_back(c);
    for (std::uint32_t mask = 1; mask < (1u << closed.size()); ++mask) {
      std::vector<char> drop(comps.size(), 0);
      int removed = 0;
      for (std::size_t j = 0; j < closed.size(); ++j)
        if (mask & (1u << j)) {
          drop[closed[j]] = 1;
          removed += static_cast<int>(comps[closed[j]].size());
        }
      std::vector<int> keep;
      for (std::size_t c = 0; c < comps.size(); ++c)
        if (!drop[c]) keep.insert(keep.end(), comps[c].begin(), comps[c].end());
      const Multigraph sub = induced_subgraph(hg, keep).canonical();
      const int g = index.at(sub.key());
      const int bg = sub.edge_count(), bh = hg.edge_count();
      const int b_removed = bh - bg;
      rep.R(g, h) += (dn - bg + 1.0) / (dn - bh + 1.0) *
                         std::sqrt(static_cast<double>(graphs[g].eaut) / static_cast<double>(graphs[h].eaut)) *
                         spike_factor(b_removed) * std::pow(lambda, removed);
    }
  }
  // gamma_H = beta_H - sum_{G < H} R_{G,H} gamma_G.
  rep.gamma = rep.R.transpose().triangularView<Eigen::Lower>().solve(rep.beta);
  rep.corr2_bound = 2.0 * rep.gamma.squaredNorm();
  rep.mmse_bound = dn - rep.corr2_bound;
  return rep;
}

void validate_wishart_A(const SymmetricTensor& a, double tol) {
  const auto& idx = a.index();
  for (std::size_t r = 0; r < a.size(); ++r)
    if (idx.repeat_product[r] != 1.0 && a.values()[r] != 0.0)
      throw InputError("A must vanish on positions with a repeated index");
  const double target = std::pow(static_cast<double>(a.n()), a.p());
  if (std::abs(a.frobenius_squared() - target) > tol * target)
    throw InputError("A must satisfy ||A||_F^2 = n^p exactly");
}

double wishart_beta(const Multigraph& g, long r, const SymmetricTensor& a) {
  require(!g.is_open(), "wishart_beta takes a closed graph");
  require(g.p() == a.p(), "graph regularity differs from the tensor arity");
  require(r >= 1, "bin count must be positive");
  validate_wishart_A(a);
  if (g.d() == 0) return 1.0;
  const auto dec = decompose(g);
  double prod = 1.0;
  int conn = 0;
  const DenseTensor dense = a.dense();
  for (const auto& c : dec.components) {
    if (c.is_frobenius || c.has_loop) return 0.0;
    prod *= std::pow(moment(c.graph, dense), c.multiplicity);
    conn += c.multiplicity;
  }
  const double dn = static_cast<double>(a.n());
  const int b = g.edge_count();
  return falling(dn, b) / std::pow(dn, b) * std::pow(static_cast<double>(r), conn - 0.5 * g.d()) * prod;
}

int wishart_xi(int p) { return p % 2 == 0 ? 3 : 4; }

AdvantageReport wishart_advantage(long r, int D, const SymmetricTensor& a) {
  CumulantEngine engine(a.p(), a.n());
  return wishart_advantage(engine, r, D, a);
}

AdvantageReport wishart_advantage(CumulantEngine& engine, long r, int D, const SymmetricTensor& a) {
  require(D >= 0, "degree must be non-negative");
  require(engine.p() == a.p() && engine.n() == a.n(), "tensor shape differs from the engine");
  validate_wishart_A(a);
  AdvantageReport rep;
  rep.model = "wishart";
  rep.p = engine.p();
  rep.n = engine.n();
  rep.D = D;
  rep.r = r;
  rep.a_spec = "wishart_like_A";
  rep.certified = certified_degree(rep.p, rep.n, D);
  rep.xi = wishart_xi(rep.p);
  for (int d = 1; d <= D; ++d) {
    if (!has_closed_graphs(rep.p, d)) continue;
    const CumulantBlock& blk = engine.block(d);
    Eigen::VectorXd raw(blk.size());
    for (int i = 0; i < blk.size(); ++i) raw[i] = wishart_beta(blk.classes[i].graph, r, a);
    rep.degrees.push_back(degree_term(blk, raw));
    if (d == rep.xi) rep.dominant = rep.degrees.back().singular ? rep.degrees.back().bound : rep.degrees.back().exact;
  }
  finish(rep);
  return rep;
}

double ScalingFit::n_error() const { return std::abs(n_slope - expected_n_slope) / expected_n_slope; }
double ScalingFit::r_error() const { return std::abs(r_slope - expected_r_slope) / expected_r_slope; }

ScalingFit wishart_scaling_fit(int p, const std::vector<long>& ns, const std::vector<long>& rs) {
  require(ns.size() >= 2 && rs.size() >= 2, "scaling fit needs at least two values of n and of r");
  ScalingFit fit;
  fit.p = p;
  fit.xi = wishart_xi(p);
  fit.ns = ns;
  fit.rs = rs;
  fit.expected_n_slope = 0.5 * p * fit.xi;
  fit.expected_r_slope = fit.xi - 2.0;
  fit.values.resize(static_cast<Eigen::Index>(ns.size()), static_cast<Eigen::Index>(rs.size()));
  const auto rows = static_cast<Eigen::Index>(ns.size() * rs.size());
  Eigen::MatrixXd x(rows, 3);
  Eigen::VectorXd y(rows);
  Eigen::Index row = 0;
  for (std::size_t i = 0; i < ns.size(); ++i) {
    CumulantEngine engine(p, ns[i]);
    const SymmetricTensor a = wishart_like_A(p, static_cast<int>(ns[i]));
    for (std::size_t j = 0; j < rs.size(); ++j) {
      const double excess = wishart_advantage(engine, rs[j], fit.xi, a).adv2 - 1.0;
      if (!(excess > 0.0)) throw NumericError("dominant Wishart term vanished; cannot fit a log slope");
      fit.values(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = excess;
      x.row(row) << 1.0, std::log(static_cast<double>(ns[i])), -std::log(static_cast<double>(rs[j]));
      y[row++] = std::log(excess);
    }
  }
  const Eigen::VectorXd coef = x.colPivHouseholderQr().solve(y);
  fit.n_slope = coef[1];
  fit.r_slope = coef[2];
  return fit;
}

namespace {

struct Welford {
  std::size_t count = 0;
  double mean = 0, m2 = 0;
  void add(double x) {
    ++count;
    const double delta = x - mean;
    mean += delta / static_cast<double>(count);
    m2 += delta * (x - mean);
  }
  double variance() const { return count > 1 ? m2 / static_cast<double>(count - 1) : 0.0; }
};

}  // namespace

SeparationReport separation_experiment(const SeparationConfig& config, const SeededRng& rng) {
  require(!config.graphs.empty(), "separation needs at least one statistic graph");
  require(config.trials >= 2, "separation needs at least two trials");
  std::vector<double> coef = config.coefficients;
  if (coef.empty()) coef.assign(config.graphs.size(), 1.0);
  require(coef.size() == config.graphs.size(), "one coefficient per statistic graph required");
  for (const auto& g : config.graphs) require(!g.is_open() && g.p() == config.p, "statistic graphs must be closed p-regular");

  CumulantEngine engine(config.p, config.n);
  SymmetricTensor a;
  if (config.model == PlantedModel::Wishart) a = wishart_like_A(config.p, static_cast<int>(config.n));
  SeparationReport rep;
  for (std::size_t i = 0; i < coef.size(); ++i)
    rep.predicted += coef[i] * (config.model == PlantedModel::Pca ? pca_beta(config.graphs[i], config.n, config.lambda)
                                                                 : wishart_beta(config.graphs[i], config.r, a));
  auto statistic = [&](const SymmetricTensor& t) {
    double s = 0.0;
    for (std::size_t i = 0; i < coef.size(); ++i) s += coef[i] * engine.centered(config.graphs[i], t);
    return s;
  };
  const SeededRng null_rng = rng.stream(0), planted_rng = rng.stream(1);
  const int n = static_cast<int>(config.n);
  Welford null, planted;
  for (std::size_t k = 0; k < config.trials; ++k) {
    Engine e0 = null_rng.engine(k);
    null.add(statistic(sample_wigner(config.p, n, 1.0, e0)));
    Engine e1 = planted_rng.engine(k);
    if (config.model == PlantedModel::Pca)
      planted.add(statistic(spiked_sample(config.p, n, config.lambda, e1).y));
    else
      planted.add(statistic(wishart_mixture_sample(a, static_cast<int>(config.r), e1)));
  }
  rep.trials = config.trials;
  rep.mean_null = null.mean;
  rep.mean_planted = planted.mean;
  rep.var_null = null.variance();
  rep.var_planted = planted.variance();
  const double diff = rep.mean_planted - rep.mean_null;
  const double pooled = std::sqrt(0.5 * (rep.var_null + rep.var_planted));
  rep.separation = pooled > 0.0 ? diff / pooled : 0.0;
  const double se = std::sqrt((rep.var_null + rep.var_planted) / static_cast<double>(config.trials));
  rep.z_agreement = se > 0.0 ? (diff - rep.predicted) / se : 0.0;
  return rep;
}

}  // namespace tcm
