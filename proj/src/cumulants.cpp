// SPDX-License-Identifier: MIT
#include "tcm/cumulants.hpp"

#include <Eigen/Eigenvalues>
#include <cmath>

#include "tcm/combinatorics.hpp"
#include "tcm/error.hpp"

namespace tcm {

namespace {

RealizationSpace::Kind space_kind(BasisKind kind) {
  switch (kind) {
    case BasisKind::Closed: return RealizationSpace::Kind::Closed;
    case BasisKind::OpenPendant: return RealizationSpace::Kind::Pendant;
    case BasisKind::OpenChopped: return RealizationSpace::Kind::Chopped;
  }
  return RealizationSpace::Kind::Closed;
}

int half_edges(BasisKind kind, int d, int p) {
  switch (kind) {
    case BasisKind::Closed: return p * d;
    case BasisKind::OpenPendant: return p * d + 1;
    case BasisKind::OpenChopped: return p * d - 1;
  }
  return p * d;
}

// Labels summed injectively for a graph of this kind (closed edges, plus the open edge when distinct).
int injective_edges(const Multigraph& g, BasisKind kind) {
  return g.closed_edge_count() + (kind == BasisKind::OpenPendant ? 1 : 0);
}

// Welford accumulator.
struct Running {
  std::size_t count = 0;
  double mean = 0, m2 = 0;
  void add(double x) {
    ++count;
    const double delta = x - mean;
    mean += delta / static_cast<double>(count);
    m2 += delta * (x - mean);
  }
  McEstimate estimate() const {
    McEstimate e;
    e.mean = mean;
    e.trials = count;
    e.se = count > 1 ? std::sqrt(m2 / static_cast<double>(count - 1) / static_cast<double>(count)) : 0.0;
    return e;
  }
};

// Per-vertex lists of edge labels (closed edges in edges() order, loops twice).
std::vector<std::vector<int>> vertex_labels(const Multigraph& g) {
  std::vector<std::vector<int>> out(g.d());
  const auto edges = g.graph().edges();
  for (int e = 0; e < static_cast<int>(edges.size()); ++e) {
    out[edges[e].first].push_back(e);
    out[edges[e].second].push_back(e);
  }
  return out;
}

using RowMat = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

// Contract the trailing modes of t with columns cols[:, js[k]] for the last js.size() modes.
// Returns the remaining tensor over the leading p - js.size() modes.
Eigen::VectorXd contract_trailing(const DenseTensor& t, const Eigen::MatrixXd& cols, const std::vector<int>& js) {
  Eigen::VectorXd cur = Eigen::Map<const Eigen::VectorXd>(t.data.data(), static_cast<Eigen::Index>(t.data.size()));
  const Eigen::Index n = t.n;
  for (int k = static_cast<int>(js.size()) - 1; k >= 0; --k) {
    Eigen::Map<const RowMat> m(cur.data(), cur.size() / n, n);
    Eigen::VectorXd next = m * cols.col(js[k]);
    cur = std::move(next);
  }
  return cur;
}

struct TrialGraph {
  Multigraph g;
  CenterVector x;
  std::vector<std::vector<int>> labels;
  std::vector<std::vector<int>> comps;
  std::vector<int> open_comp;  // 1 if the component holds the open vertex
  int b = 0;
};

TrialGraph prepare(const Multigraph& g, const CenterVector& x) {
  TrialGraph tg;
  tg.g = g;
  tg.comps = component_vertex_sets(g);
  require(x.size() == tg.comps.size(), "center vector length differs from the component count");
  tg.x = x;
  tg.labels = vertex_labels(g);
  tg.b = g.closed_edge_count();
  for (const auto& c : tg.comps) {
    const bool open = g.is_open() && std::find(c.begin(), c.end(), g.open_vertex()) != c.end();
    tg.open_comp.push_back(open ? 1 : 0);
  }
  return tg;
}

// prod over closed components of (prod of rotated entries + x_C); the open vertex is skipped.
double closed_part(const TrialGraph& tg, const DenseTensor& t, const Eigen::MatrixXd& cols) {
  double out = 1.0;
  for (std::size_t c = 0; c < tg.comps.size(); ++c) {
    double prod = 1.0;
    for (int v : tg.comps[c]) {
      if (tg.g.is_open() && v == tg.g.open_vertex()) continue;
      prod *= contract_trailing(t, cols, tg.labels[v])[0];
    }
    out *= tg.open_comp[c] ? prod : prod + tg.x[c];
  }
  return out;
}

}  // namespace

BasisKind open_kind(OpenIndexPolicy policy) {
  return policy == OpenIndexPolicy::Distinct ? BasisKind::OpenPendant : BasisKind::OpenChopped;
}

int CumulantBlock::index_of(const Multigraph& g) const {
  auto it = index.find(g.key());
  if (it == index.end()) throw InputError("graph " + g.key() + " is not in this basis block");
  return it->second;
}

Eigen::MatrixXd CumulantBlock::coefficients() const {
  Eigen::MatrixXd c = wg;
  for (int i = 0; i < size(); ++i) c.row(i) *= falling_b / labeled * static_cast<double>(classes[i].eaut);
  return c;
}

Eigen::MatrixXd CumulantBlock::inner() const {
  Eigen::MatrixXd m = wg;
  for (int i = 0; i < size(); ++i)
    for (int j = 0; j < size(); ++j)
      m(i, j) *= falling_b * falling_b / labeled * static_cast<double>(classes[i].eaut) *
                 static_cast<double>(classes[j].eaut);
  return m;
}

Eigen::MatrixXd CumulantBlock::gram() const {
  Eigen::MatrixXd m = wg;
  const double scale = std::pow(static_cast<double>(n), edges) / labeled;
  for (int i = 0; i < size(); ++i)
    for (int j = 0; j < size(); ++j)
      m(i, j) *= scale * std::sqrt(static_cast<double>(classes[i].eaut) * static_cast<double>(classes[j].eaut));
  return m;
}

double CumulantBlock::normalization(int i) const {
  return std::pow(static_cast<double>(n), 0.5 * edges) /
         (falling_b * std::sqrt(static_cast<double>(classes[i].eaut)));
}

// Standard errors below rounding level of the values are floored there, so
// estimators that are exact per draw do not produce spurious z-scores.
namespace {
double effective_se(double se, double expected) { return std::max(se, 1e-10 * std::max(1.0, std::abs(expected))); }
}  // namespace

double McEstimate::z(double expected) const { return (mean - expected) / effective_se(se, expected); }

double McVector::max_abs_z(const Eigen::VectorXd& expected) const {
  double worst = 0.0;
  for (Eigen::Index i = 0; i < mean.size(); ++i)
    worst = std::max(worst, std::abs(mean[i] - expected[i]) / effective_se(se[i], expected[i]));
  return worst;
}

CumulantEngine::CumulantEngine(int p, long n, WeingartenOptions options, EnumerationLimits limits)
    : p_(p), n_(n), options_(options), limits_(limits) {
  require(p >= 1, "p must be positive");
  require(n >= 1, "n must be positive");
}

const WeingartenTable& CumulantEngine::table(int ell) {
  auto& slot = tables_[ell];
  if (!slot) slot = std::make_unique<WeingartenTable>(ell, n_, options_);
  return *slot;
}

const CumulantBlock& CumulantEngine::block(int d, BasisKind kind) {
  auto& slot = blocks_[{d, static_cast<int>(kind)}];
  if (slot) return *slot;
  require(d >= 0, "vertex count must be non-negative");
  const int ell = half_edges(kind, d, p_);
  if (kind != BasisKind::Closed) {
    require(d >= 1, "1-open graphs need at least one vertex");
    require((p_ * d) % 2 == 1, "1-open graphs need p d odd");
  } else {
    require(ell % 2 == 0, "closed graphs need p d even");
  }
  auto blk = std::make_unique<CumulantBlock>();
  blk->kind = kind;
  blk->p = p_;
  blk->d = d;
  blk->n = n_;
  blk->edges = ell / 2;
  if (kind == BasisKind::OpenChopped) {
    blk->labeled = std::pow(factorial_d(p_), d - 1) * factorial_d(p_ - 1) * factorial_d(d - 1);
  } else {
    blk->labeled = std::pow(factorial_d(p_), d) * factorial_d(d);
  }
  blk->falling_b = falling(static_cast<double>(n_), blk->edges);
  EnumerationLimits lim = limits_;
  if (ell > lim.max_half_edges) throw CapacityError("basis block needs " + std::to_string(ell) + " half-edges, guard is " +
                                                    std::to_string(lim.max_half_edges));
  RealizationSpace space(space_kind(kind), d, p_, lim);
  blk->classes = space.classes();
  for (int i = 0; i < blk->size(); ++i) blk->index.emplace(blk->classes[i].graph.key(), i);
  blk->wg = graph_weingarten_matrix(space, table(ell));
  slot = std::move(blk);
  return *slot;
}

Eigen::VectorXd CumulantEngine::kappa_block(int d, const SymmetricTensor& t) {
  require(t.p() == p_ && t.n() == n_, "tensor shape differs from the engine");
  if (d == 0) return Eigen::VectorXd::Ones(1);
  const CumulantBlock& blk = block(d);
  const DenseTensor dense = t.dense();
  Eigen::VectorXd m(blk.size());
  for (int i = 0; i < blk.size(); ++i) m[i] = moment(blk.classes[i].graph, dense);
  return blk.coefficients() * m;
}

double CumulantEngine::kappa(const Multigraph& g, const SymmetricTensor& t) {
  require(!g.is_open(), "kappa takes a closed graph; use open_kappa");
  require(g.p() == p_, "graph regularity differs from the engine");
  if (g.d() == 0) return 1.0;
  const CumulantBlock& blk = block(g.d());
  const int i = blk.index_of(g.canonical());
  const DenseTensor dense = t.dense();
  double out = 0.0;
  for (int j = 0; j < blk.size(); ++j) {
    if (blk.wg(i, j) == 0.0) continue;
    out += blk.wg(i, j) * moment(blk.classes[j].graph, dense);
  }
  return out * blk.falling_b / blk.labeled * static_cast<double>(blk.classes[i].eaut);
}

Eigen::VectorXd CumulantEngine::open_kappa(const Multigraph& g, const SymmetricTensor& t, OpenIndexPolicy policy) {
  require(g.is_open(), "open_kappa takes a 1-open graph");
  require(g.p() == p_ && t.p() == p_ && t.n() == n_, "shapes differ from the engine");
  const CumulantBlock& blk = block(g.d(), open_kind(policy));
  const int i = blk.index_of(g.canonical());
  const DenseTensor dense = t.dense();
  Eigen::VectorXd out = Eigen::VectorXd::Zero(n_);
  for (int j = 0; j < blk.size(); ++j) {
    if (blk.wg(i, j) == 0.0) continue;
    out += blk.wg(i, j) * open_moment(blk.classes[j].graph, dense);
  }
  return out * (blk.falling_b / blk.labeled * static_cast<double>(blk.classes[i].eaut));
}

namespace {

// Visit every subset S of the centered (non-open, x != 0) components.
template <class F>
void for_center_subsets(const Multigraph& g, const CenterVector& x, F&& visit) {
  const auto comps = component_vertex_sets(g);
  require(x.size() == comps.size(), "center vector length differs from the component count");
  std::vector<int> active;
  for (int c = 0; c < static_cast<int>(comps.size()); ++c) {
    const bool open = g.is_open() && std::find(comps[c].begin(), comps[c].end(), g.open_vertex()) != comps[c].end();
    if (!open && x[c] != 0.0) active.push_back(c);
  }
  require(active.size() < 20, "too many centered components");
  for (std::uint32_t mask = 0; mask < (1u << active.size()); ++mask) {
    double weight = 1.0;
    int removed_edges = 0;
    std::vector<char> drop(comps.size(), 0);
    for (std::size_t k = 0; k < active.size(); ++k)
      if (mask & (1u << k)) {
        drop[active[k]] = 1;
        weight *= x[active[k]];
        removed_edges += g.p() * static_cast<int>(comps[active[k]].size()) / 2;
      }
    std::vector<int> keep;
    for (std::size_t c = 0; c < comps.size(); ++c)
      if (!drop[c]) keep.insert(keep.end(), comps[c].begin(), comps[c].end());
    visit(weight, removed_edges, induced_subgraph(g, keep));
  }
}

}  // namespace

double CumulantEngine::centered(const Multigraph& g, const SymmetricTensor& t, const CenterVector& x) {
  require(!g.is_open(), "centered takes a closed graph");
  const int b = g.edge_count();
  double out = 0.0;
  for_center_subsets(g, x, [&](double weight, int bs, const Multigraph& rest) {
    out += weight * falling(static_cast<double>(n_ - b + bs), bs) * kappa(rest, t);
  });
  return out;
}

double CumulantEngine::centered(const Multigraph& g, const SymmetricTensor& t) {
  return centered(g, t, default_centers(g));
}

double CumulantEngine::normalized(const Multigraph& g, const SymmetricTensor& t) {
  return normalization(g) * centered(g, t);
}

Eigen::VectorXd CumulantEngine::open_centered(const Multigraph& g, const SymmetricTensor& t, const CenterVector& x,
                                              OpenIndexPolicy policy) {
  require(g.is_open(), "open_centered takes a 1-open graph");
  const int b = injective_edges(g, open_kind(policy));
  Eigen::VectorXd out = Eigen::VectorXd::Zero(n_);
  for_center_subsets(g, x, [&](double weight, int bs, const Multigraph& rest) {
    out += weight * falling(static_cast<double>(n_ - b + bs), bs) * open_kappa(rest, t, policy);
  });
  return out;
}

Eigen::VectorXd CumulantEngine::open_centered(const Multigraph& g, const SymmetricTensor& t, OpenIndexPolicy policy) {
  return open_centered(g, t, default_centers(g), policy);
}

double CumulantEngine::inner(const Multigraph& g, const Multigraph& h) {
  require(!g.is_open() && !h.is_open(), "inner takes closed graphs");
  if (g.d() != h.d()) return 0.0;
  if (g.d() == 0) return 1.0;
  const CumulantBlock& blk = block(g.d());
  return blk.inner()(blk.index_of(g.canonical()), blk.index_of(h.canonical()));
}

double CumulantEngine::open_inner(const Multigraph& g, const Multigraph& h, OpenIndexPolicy policy) {
  require(g.is_open() && h.is_open(), "open_inner takes 1-open graphs");
  if (g.d() != h.d()) return 0.0;
  const CumulantBlock& blk = block(g.d(), open_kind(policy));
  return blk.inner()(blk.index_of(g.canonical()), blk.index_of(h.canonical()));
}

double CumulantEngine::normalization(const Multigraph& g, OpenIndexPolicy policy) {
  if (g.d() == 0) return 1.0;
  const CumulantBlock& blk = block(g.d(), g.is_open() ? open_kind(policy) : BasisKind::Closed);
  return blk.normalization(blk.index_of(g.canonical()));
}

double cumulant_exact(const Multigraph& g, const SymmetricTensor& t, const WeingartenTable& table) {
  require(!g.is_open(), "cumulant_exact takes a closed graph");
  require(g.p() == t.p(), "tensor arity differs from graph regularity");
  if (g.d() == 0) return 1.0;
  const int ell = g.p() * g.d();
  if (table.ell() != ell) throw InputError("Weingarten table has l = " + std::to_string(table.ell()) + ", graph needs " +
                                           std::to_string(ell));
  require(table.n() == t.n(), "Weingarten table dimension differs from the tensor");
  RealizationSpace space(RealizationSpace::Kind::Closed, g.d(), g.p(), EnumerationLimits{std::max(16, ell)});
  const Eigen::MatrixXd wg = graph_weingarten_matrix(space, table);
  const int i = space.index_of(g.canonical().key());
  const DenseTensor dense = t.dense();
  double sum = 0.0;
  for (int j = 0; j < wg.cols(); ++j) sum += wg(i, j) * moment(space.classes()[j].graph, dense);
  const double labeled = std::pow(factorial_d(g.p()), g.d()) * factorial_d(g.d());
  return falling(static_cast<double>(t.n()), g.edge_count()) / labeled * static_cast<double>(space.classes()[i].eaut) *
         sum;
}

double centered_cumulant(const Multigraph& g, const SymmetricTensor& t, CumulantEngine& engine) {
  return engine.centered(g, t);
}

double spike_cumulant(const Multigraph& g, long n, double norm2, double lambda) {
  require(!g.is_open(), "spike_cumulant takes a closed graph");
  if (g.d() == 0) return 1.0;
  const int b = g.edge_count();
  const double dn = static_cast<double>(n);
  return std::pow(lambda, g.d()) * std::pow(norm2, b) * falling(dn, b) / double_falling_d(dn + 2.0 * b - 2.0, b);
}

Eigen::MatrixXd sample_haar_columns(int n, int k, Engine& rng) {
  require(k >= 0 && k <= n, "column count must lie in [0, n]");
  const Eigen::MatrixXd g = sample_ginibre(n, 1.0, rng).leftCols(k);
  Eigen::HouseholderQR<Eigen::MatrixXd> qr(g);
  Eigen::MatrixXd q = qr.householderQ() * Eigen::MatrixXd::Identity(n, k);
  const auto& r = qr.matrixQR();
  for (int c = 0; c < k; ++c)
    if (r(c, c) < 0) q.col(c) *= -1.0;
  return q;
}

std::vector<McEstimate> cumulant_mc(const std::vector<Multigraph>& graphs, const std::vector<CenterVector>& centers,
                                    const SymmetricTensor& t, std::size_t trials, const SeededRng& rng) {
  if (trials == 0) throw InputError("Monte Carlo needs at least one trial");
  require(graphs.size() == centers.size(), "one center vector per graph required");
  const int n = t.n();
  std::vector<TrialGraph> prepared;
  int bmax = 0;
  for (std::size_t k = 0; k < graphs.size(); ++k) {
    require(!graphs[k].is_open(), "cumulant_mc takes closed graphs");
    require(graphs[k].p() == t.p(), "tensor arity differs from graph regularity");
    prepared.push_back(prepare(graphs[k], centers[k]));
    bmax = std::max(bmax, prepared.back().b);
  }
  std::vector<Running> acc(graphs.size());
  if (bmax > n) {
    // No injective labeling exists; only the empty graph survives.
    std::vector<McEstimate> out;
    for (std::size_t k = 0; k < graphs.size(); ++k) {
      McEstimate e;
      e.trials = trials;
      e.mean = prepared[k].b == 0 ? 1.0 : 0.0;
      out.push_back(e);
    }
    return out;
  }
  const DenseTensor dense = t.dense();
  for (std::size_t trial = 0; trial < trials; ++trial) {
    Engine eng = rng.engine(trial);
    const Eigen::MatrixXd cols = sample_haar_columns(n, bmax, eng);
    for (std::size_t k = 0; k < prepared.size(); ++k) {
      const double scale = falling(static_cast<double>(n), prepared[k].b);
      acc[k].add(scale * closed_part(prepared[k], dense, cols));
    }
  }
  std::vector<McEstimate> out;
  for (const auto& a : acc) out.push_back(a.estimate());
  return out;
}

McEstimate cumulant_mc(const Multigraph& g, const SymmetricTensor& t, const CenterVector& x, std::size_t trials,
                       const SeededRng& rng) {
  return cumulant_mc(std::vector<Multigraph>{g}, std::vector<CenterVector>{x}, t, trials, rng)[0];
}

McEstimate cumulant_mc(const Multigraph& g, const SymmetricTensor& t, std::size_t trials, const SeededRng& rng) {
  return cumulant_mc(g, t, CenterVector(component_vertex_sets(g).size(), 0.0), trials, rng);
}

McVector open_cumulant_mc(const Multigraph& g, const SymmetricTensor& t, const CenterVector& x,
                          OpenIndexPolicy policy, std::size_t trials, const SeededRng& rng) {
  if (trials == 0) throw InputError("Monte Carlo needs at least one trial");
  require(g.is_open(), "open_cumulant_mc takes a 1-open graph");
  require(g.p() == t.p(), "tensor arity differs from graph regularity");
  const int n = t.n();
  const TrialGraph tg = prepare(g, x);
  const bool distinct = policy == OpenIndexPolicy::Distinct;
  const int columns = tg.b + (distinct ? 1 : 0);
  McVector out;
  out.trials = trials;
  out.mean = Eigen::VectorXd::Zero(n);
  out.se = Eigen::VectorXd::Zero(n);
  if (columns > n) return out;
  const double scale = falling(static_cast<double>(n), columns);
  const DenseTensor dense = t.dense();
  Eigen::VectorXd sum = Eigen::VectorXd::Zero(n), sum2 = Eigen::VectorXd::Zero(n);
  for (std::size_t trial = 0; trial < trials; ++trial) {
    Engine eng = rng.engine(trial);
    const Eigen::MatrixXd cols = sample_haar_columns(n, columns, eng);
    // The open vertex keeps its leading mode free; closed labels fill the rest.
    const Eigen::VectorXd u = contract_trailing(dense, cols, tg.labels[g.open_vertex()]);
    Eigen::VectorXd value = distinct ? Eigen::VectorXd(cols.col(tg.b) * cols.col(tg.b).dot(u)) : u;
    value *= scale * closed_part(tg, dense, cols);
    sum += value;
    sum2 += value.cwiseProduct(value);
  }
  const double count = static_cast<double>(trials);
  out.mean = sum / count;
  if (trials > 1) {
    const Eigen::VectorXd var = (sum2 - count * out.mean.cwiseProduct(out.mean)) / (count - 1.0);
    out.se = (var.cwiseMax(0.0) / count).cwiseSqrt();
  }
  return out;
}

CumulantGram build_gram(CumulantEngine& engine, int d, BasisKind kind) {
  const CumulantBlock& blk = engine.block(d, kind);
  CumulantGram out;
  out.kind = kind;
  out.p = engine.p();
  out.d = d;
  out.n = engine.n();
  for (const auto& c : blk.classes) out.keys.push_back(c.graph.key());
  out.matrix = blk.gram();
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(0.5 * (out.matrix + out.matrix.transpose()));
  out.eigenvalues = es.eigenvalues();
  return out;
}

double additivity_prediction(const Multigraph& g, const SymmetricTensor& a, const SymmetricTensor& b,
                             CumulantEngine& engine) {
  require(!g.is_open(), "additivity takes a closed graph");
  const auto comps = component_vertex_sets(g);
  require(comps.size() < 20, "too many components");
  const double n = static_cast<double>(engine.n());
  const int total = g.edge_count();
  double out = 0.0;
  for (std::uint32_t mask = 0; mask < (1u << comps.size()); ++mask) {
    std::vector<int> in_a, in_b;
    for (std::size_t c = 0; c < comps.size(); ++c)
      ((mask & (1u << c)) ? in_a : in_b).insert(((mask & (1u << c)) ? in_a : in_b).end(), comps[c].begin(),
                                                comps[c].end());
    const Multigraph ga = induced_subgraph(g, in_a);
    const Multigraph gb = induced_subgraph(g, in_b);
    const int ba = ga.edge_count();
    const double prefactor = falling(n, total) / (falling(n, ba) * falling(n, total - ba));
    out += prefactor * engine.kappa(ga, a) * engine.kappa(gb, b);
  }
  return out;
}

AdditivityReport verify_additivity(const Multigraph& g, const SymmetricTensor& a, const SymmetricTensor& b,
                                   std::size_t trials, const SeededRng& rng, CumulantEngine& engine) {
  if (trials == 0) throw InputError("Monte Carlo needs at least one trial");
  require(a.p() == b.p() && a.n() == b.n(), "A and B must share (p, n)");
  Running acc;
  for (std::size_t trial = 0; trial < trials; ++trial) {
    Engine eng = rng.engine(trial);
    const SymmetricTensor sum = a + conjugate(sample_haar(a.n(), eng), b);
    acc.add(engine.kappa(g, sum));
  }
  AdditivityReport rep;
  rep.mc = acc.estimate();
  rep.predicted = additivity_prediction(g, a, b, engine);
  rep.z = rep.mc.z(rep.predicted);
  rep.connected = component_vertex_sets(g).size() <= 1;
  return rep;
}

}  // namespace tcm
