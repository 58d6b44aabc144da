// SPDX-License-Identifier: MIT
#include "tcm/contraction.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>
#include <set>

#include "tcm/error.hpp"

namespace tcm {

namespace {

struct Factor {
  std::vector<int> legs;
  std::vector<double> data;  // first leg slowest
};

std::size_t ipow(int n, std::size_t k) {
  std::size_t r = 1;
  for (std::size_t i = 0; i < k; ++i) r *= static_cast<std::size_t>(n);
  return r;
}

// Reorder legs: result leg k is the old leg at position order[k].
Factor permute(const Factor& f, const std::vector<int>& order, int n) {
  const std::size_t r = f.legs.size();
  std::vector<std::size_t> old_stride(r);
  for (std::size_t k = 0; k < r; ++k) old_stride[k] = ipow(n, r - 1 - k);
  bool identity = true;
  for (std::size_t k = 0; k < r; ++k) identity &= (order[k] == static_cast<int>(k));
  Factor out;
  for (int o : order) out.legs.push_back(f.legs[o]);
  if (identity) {
    out.data = f.data;
    return out;
  }
  out.data.resize(f.data.size());
  std::vector<int> idx(r, 0);
  std::size_t src = 0;
  for (std::size_t dst = 0; dst < out.data.size(); ++dst) {
    out.data[dst] = f.data[src];
    for (int k = static_cast<int>(r) - 1; k >= 0; --k) {
      src += old_stride[order[k]];
      if (++idx[k] < n) break;
      src -= old_stride[order[k]] * static_cast<std::size_t>(n);
      idx[k] = 0;
    }
  }
  return out;
}

// Sum over the diagonal of two legs with equal labels.
Factor trace_pair(const Factor& f, int a, int b, int n) {
  std::vector<int> order;
  for (int k = 0; k < static_cast<int>(f.legs.size()); ++k)
    if (k != a && k != b) order.push_back(k);
  order.push_back(a);
  order.push_back(b);
  const Factor moved = permute(f, order, n);
  Factor out;
  out.legs.assign(moved.legs.begin(), moved.legs.end() - 2);
  const std::size_t block = static_cast<std::size_t>(n) * n;
  const std::size_t outer = moved.data.size() / std::max<std::size_t>(block, 1);
  out.data.assign(outer, 0.0);
  for (std::size_t o = 0; o < outer; ++o)
    for (int s = 0; s < n; ++s) out.data[o] += moved.data[o * block + static_cast<std::size_t>(s) * (n + 1)];
  return out;
}

Factor self_trace(Factor f, int n) {
  while (true) {
    int a = -1, b = -1;
    for (int i = 0; i < static_cast<int>(f.legs.size()) && a < 0; ++i)
      for (int j = i + 1; j < static_cast<int>(f.legs.size()); ++j)
        if (f.legs[i] == f.legs[j]) {
          a = i;
          b = j;
          break;
        }
    if (a < 0) return f;
    f = trace_pair(f, a, b, n);
  }
}

struct SharedLegs {
  std::vector<int> free_a, shared_a, shared_b, free_b;
};

SharedLegs split_legs(const std::vector<int>& a, const std::vector<int>& b) {
  SharedLegs s;
  for (int i = 0; i < static_cast<int>(a.size()); ++i) {
    auto it = std::find(b.begin(), b.end(), a[i]);
    if (it == b.end()) {
      s.free_a.push_back(i);
    } else {
      s.shared_a.push_back(i);
      s.shared_b.push_back(static_cast<int>(it - b.begin()));
    }
  }
  for (int j = 0; j < static_cast<int>(b.size()); ++j)
    if (std::find(s.shared_b.begin(), s.shared_b.end(), j) == s.shared_b.end()) s.free_b.push_back(j);
  return s;
}

Factor contract_pair(const Factor& a, const Factor& b, int n) {
  const SharedLegs s = split_legs(a.legs, b.legs);
  std::vector<int> order_a = s.free_a;
  order_a.insert(order_a.end(), s.shared_a.begin(), s.shared_a.end());
  std::vector<int> order_b = s.shared_b;
  order_b.insert(order_b.end(), s.free_b.begin(), s.free_b.end());
  const Factor pa = permute(a, order_a, n);
  const Factor pb = permute(b, order_b, n);
  const auto rows = static_cast<Eigen::Index>(ipow(n, s.free_a.size()));
  const auto inner = static_cast<Eigen::Index>(ipow(n, s.shared_a.size()));
  const auto cols = static_cast<Eigen::Index>(ipow(n, s.free_b.size()));
  using RowMat = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
  Eigen::Map<const RowMat> ma(pa.data.data(), rows, inner);
  Eigen::Map<const RowMat> mb(pb.data.data(), inner, cols);
  Factor out;
  for (int i : s.free_a) out.legs.push_back(a.legs[i]);
  for (int j : s.free_b) out.legs.push_back(b.legs[j]);
  out.data.resize(static_cast<std::size_t>(rows * cols));
  Eigen::Map<RowMat> mc(out.data.data(), rows, cols);
  mc.noalias() = ma * mb;
  return out;
}

std::vector<int> legs_after_trace(std::vector<int> legs) {
  std::vector<int> out;
  std::sort(legs.begin(), legs.end());
  for (std::size_t i = 0; i < legs.size();) {
    std::size_t j = i;
    while (j < legs.size() && legs[j] == legs[i]) ++j;
    if ((j - i) % 2 == 1) out.push_back(legs[i]);
    i = j;
  }
  return out;
}

// Legs of each vertex: closed edge labels in edges() order, loops twice, open legs last.
std::vector<std::vector<int>> vertex_legs(const LabeledGraph& g, const std::vector<int>& open_legs) {
  std::vector<std::vector<int>> legs(g.size());
  const auto edges = g.edges();
  for (int e = 0; e < static_cast<int>(edges.size()); ++e) {
    legs[edges[e].first].push_back(e);
    legs[edges[e].second].push_back(e);
  }
  int next = static_cast<int>(edges.size());
  for (int v = 0; v < g.size(); ++v)
    for (int k = 0; k < (open_legs.empty() ? 0 : open_legs[v]); ++k) legs[v].push_back(next++);
  return legs;
}

}  // namespace

ContractionPlan plan_contraction(const LabeledGraph& g, const std::vector<int>& open_legs, int n) {
  require(open_legs.empty() || static_cast<int>(open_legs.size()) == g.size(), "open leg count per vertex mismatch");
  ContractionPlan plan;
  const auto legs = vertex_legs(g, open_legs);
  std::vector<std::vector<int>> live_legs;
  std::vector<int> live;
  for (int v = 0; v < g.size(); ++v) {
    plan.factor_legs.push_back(legs_after_trace(legs[v]));
    live_legs.push_back(plan.factor_legs.back());
    live.push_back(v);
    plan.max_arity = std::max(plan.max_arity, static_cast<int>(legs[v].size()));
  }
  const double dn = static_cast<double>(n);
  while (live.size() > 1) {
    int best_i = -1, best_j = -1, best_arity = 0, best_shared = -1;
    for (std::size_t i = 0; i < live.size(); ++i)
      for (std::size_t j = i + 1; j < live.size(); ++j) {
        const auto s = split_legs(live_legs[live[i]], live_legs[live[j]]);
        const int shared = static_cast<int>(s.shared_a.size());
        const int arity = static_cast<int>(s.free_a.size() + s.free_b.size());
        const bool better = best_i < 0 || (shared > 0 && best_shared == 0) ||
                            ((shared > 0) == (best_shared > 0) &&
                             (arity < best_arity || (arity == best_arity && shared > best_shared)));
        if (better) {
          best_i = static_cast<int>(i);
          best_j = static_cast<int>(j);
          best_arity = arity;
          best_shared = shared;
        }
      }
    const int a = live[best_i], b = live[best_j];
    const auto s = split_legs(live_legs[a], live_legs[b]);
    ContractionStep step;
    step.left = a;
    step.right = b;
    for (int i : s.free_a) step.result_legs.push_back(live_legs[a][i]);
    for (int j : s.free_b) step.result_legs.push_back(live_legs[b][j]);
    step.cost = std::pow(dn, static_cast<double>(s.free_a.size() + s.free_b.size() + s.shared_a.size()));
    plan.cost += step.cost;
    plan.max_arity = std::max(plan.max_arity, static_cast<int>(step.result_legs.size()));
    live_legs.push_back(step.result_legs);
    live.erase(live.begin() + best_j);
    live.erase(live.begin() + best_i);
    live.push_back(static_cast<int>(live_legs.size()) - 1);
    plan.steps.push_back(std::move(step));
  }
  if (!live.empty()) plan.output_legs = live_legs[live[0]];
  return plan;
}

DenseTensor contract_network(const LabeledGraph& g, const std::vector<int>& open_legs,
                             const std::vector<const DenseTensor*>& tensors) {
  require(static_cast<int>(tensors.size()) == g.size(), "one tensor per vertex required");
  int n = -1;
  const auto legs = vertex_legs(g, open_legs);
  for (int v = 0; v < g.size(); ++v) {
    require(tensors[v] != nullptr, "missing vertex tensor");
    if (tensors[v]->p != static_cast<int>(legs[v].size()))
      throw InputError("vertex " + std::to_string(v) + " tensor arity " + std::to_string(tensors[v]->p) +
                       " differs from its degree " + std::to_string(legs[v].size()));
    require(n < 0 || tensors[v]->n == n, "vertex tensors have different dimensions");
    n = tensors[v]->n;
  }
  if (g.size() == 0) return DenseTensor{0, 0, {1.0}};
  const ContractionPlan plan = plan_contraction(g, open_legs, n);
  std::vector<Factor> factors;
  for (int v = 0; v < g.size(); ++v) factors.push_back(self_trace(Factor{legs[v], tensors[v]->data}, n));
  for (const auto& step : plan.steps) {
    factors.push_back(contract_pair(factors[step.left], factors[step.right], n));
    factors[step.left].data.clear();
    factors[step.right].data.clear();
  }
  Factor& last = factors.back();
  std::vector<int> order(last.legs.size());
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](int a, int b) { return last.legs[a] < last.legs[b]; });
  const Factor out = permute(last, order, n);
  return DenseTensor{static_cast<int>(out.legs.size()), n, out.data};
}

double moment(const Multigraph& g, const DenseTensor& t) {
  require(!g.is_open(), "moment takes a closed graph; use open_moment");
  require(t.p == g.p() || g.d() == 0, "tensor arity differs from graph regularity");
  std::vector<const DenseTensor*> ts(g.d(), &t);
  return contract_network(g.graph(), {}, ts).data[0];
}

double moment(const Multigraph& g, const SymmetricTensor& t) {
  if (g.d() == 0) return 1.0;
  return moment(g, t.dense());
}

Eigen::VectorXd open_moment(const Multigraph& g, const DenseTensor& t) {
  require(g.is_open(), "open_moment takes a 1-open graph");
  require(t.p == g.p(), "tensor arity differs from graph regularity");
  std::vector<int> open(g.d(), 0);
  open[g.open_vertex()] = 1;
  std::vector<const DenseTensor*> ts(g.d(), &t);
  const DenseTensor out = contract_network(g.graph(), open, ts);
  return Eigen::Map<const Eigen::VectorXd>(out.data.data(), static_cast<Eigen::Index>(out.data.size()));
}

Eigen::VectorXd open_moment(const Multigraph& g, const SymmetricTensor& t) { return open_moment(g, t.dense()); }

double mixed_moment(const LabeledGraph& g, const std::vector<const DenseTensor*>& tensors) {
  return contract_network(g, {}, tensors).data[0];
}

CenterVector default_centers(const Multigraph& g) {
  CenterVector x;
  for (const auto& verts : component_vertex_sets(g)) {
    const bool open = g.is_open() && std::find(verts.begin(), verts.end(), g.open_vertex()) != verts.end();
    const bool frob = !open && verts.size() == 2 && g.mult(verts[0], verts[1]) == g.p();
    x.push_back(frob ? -1.0 : 0.0);
  }
  return x;
}

CenterVector wishart_centers(const Multigraph& g, int r) {
  require(r >= 1, "bin count must be positive");
  CenterVector x = default_centers(g);
  for (auto& v : x) v /= r;
  return x;
}

DistinctSum::DistinctSum(const Multigraph& g, const CenterVector& x, bool use_symmetry) : g_(g), x_(x) {
  const auto comps = component_vertex_sets(g);
  require(x.size() == comps.size(), "center vector length differs from the component count");
  n_vertices_ = g.d();
  std::vector<int> comp_of(g.d(), -1);
  for (int c = 0; c < static_cast<int>(comps.size()); ++c)
    for (int v : comps[c]) comp_of[v] = c;
  if (g.is_open()) x_[comp_of[g.open_vertex()]] = 0.0;

  // Vertex order: components in order, breadth first inside each.
  std::vector<int> order;
  for (const auto& verts : comps) {
    std::vector<int> bfs{verts[0]};
    std::vector<char> seen(g.d(), 0);
    seen[verts[0]] = 1;
    for (std::size_t k = 0; k < bfs.size(); ++k)
      for (int w = 0; w < g.d(); ++w)
        if (!seen[w] && w != bfs[k] && g.mult(bfs[k], w) > 0) {
          seen[w] = 1;
          bfs.push_back(w);
        }
    order.insert(order.end(), bfs.begin(), bfs.end());
  }
  // Edge levels: at each vertex its loops, then edges back to earlier vertices.
  std::map<std::pair<int, int>, std::vector<int>> bundles;
  slots_.assign(g.d(), {});
  for (std::size_t k = 0; k < order.size(); ++k) {
    const int v = order[k];
    auto add = [&](int u) {
      Level lv;
      lv.u = u;
      lv.v = v;
      const int id = static_cast<int>(levels_.size());
      levels_.push_back(lv);
      bundles[{std::min(u, v), std::max(u, v)}].push_back(id);
      slots_[u].push_back(id);
      slots_[v].push_back(id);
    };
    for (int t = 0; t < g.mult(v, v); ++t) add(v);
    for (std::size_t j = 0; j < k; ++j)
      for (int t = 0; t < g.mult(order[j], v); ++t) add(order[j]);
  }
  if (g.is_open()) slots_[g.open_vertex()].insert(slots_[g.open_vertex()].begin(), -1);
  b_ = static_cast<int>(levels_.size());
  // Slot positions of each level; a loop occupies two adjacent slots.
  for (int v = 0; v < g.d(); ++v)
    for (int k = static_cast<int>(slots_[v].size()) - 1; k >= 0; --k) {
      const int l = slots_[v][k];
      if (l < 0) continue;
      if (levels_[l].u == v && levels_[l].slot_u < 0) levels_[l].slot_u = k;
      else levels_[l].slot_v = k;
    }
  std::vector<int> last_level(g.d(), -1);
  for (int l = 0; l < b_; ++l) {
    last_level[levels_[l].u] = std::max(last_level[levels_[l].u], l);
    last_level[levels_[l].v] = std::max(last_level[levels_[l].v], l);
  }
  for (int v = 0; v < g.d(); ++v)
    if (last_level[v] >= 0) levels_[last_level[v]].done.push_back(v);
  for (int c = 0; c < static_cast<int>(comps.size()); ++c) {
    int last = -1;
    for (int v : comps[c]) last = std::max(last, last_level[v]);
    if (last >= 0) levels_[last].component = c;
  }

  // Edge permutation group: vertex automorphisms preserving x, with bundle bijections.
  std::vector<std::vector<int>> vertex_perms{std::vector<int>(g.d())};
  std::iota(vertex_perms[0].begin(), vertex_perms[0].end(), 0);
  double bundle_count = 1.0;
  for (const auto& [key, ids] : bundles)
    for (std::size_t t = 2; t <= ids.size(); ++t) bundle_count *= static_cast<double>(t);
  if (use_symmetry) {
    auto auts = automorphism_group(g.graph(), g.vertex_colors(), 20000);
    if (auts && static_cast<double>(auts->size()) * bundle_count <= 200000.0) {
      vertex_perms.clear();
      for (auto& a : *auts) {
        bool keeps_x = true;
        for (int c = 0; c < static_cast<int>(comps.size()); ++c)
          keeps_x &= (x_[c] == x_[comp_of[a[comps[c][0]]]]);
        if (keeps_x) vertex_perms.push_back(a);
      }
    }
  }
  std::set<std::vector<int>> group;
  if (use_symmetry && bundle_count <= 200000.0) {
    for (const auto& a : vertex_perms) {
      std::vector<std::vector<int>> partial{std::vector<int>(b_, -1)};
      for (const auto& [key, ids] : bundles) {
        const std::pair<int, int> image{std::min(a[key.first], a[key.second]), std::max(a[key.first], a[key.second])};
        const auto& target = bundles.at(image);
        std::vector<int> perm(ids.size());
        std::iota(perm.begin(), perm.end(), 0);
        std::vector<std::vector<int>> next;
        do {
          for (const auto& base : partial) {
            auto ext = base;
            for (std::size_t t = 0; t < ids.size(); ++t) ext[ids[t]] = target[perm[t]];
            next.push_back(std::move(ext));
          }
        } while (std::next_permutation(perm.begin(), perm.end()));
        partial = std::move(next);
      }
      for (auto& e : partial) group.insert(std::move(e));
    }
  } else {
    std::vector<int> id(b_);
    std::iota(id.begin(), id.end(), 0);
    group.insert(id);
  }
  factor_ = static_cast<double>(group.size());
  // Stabilizer chain: each level takes the smallest label in its orbit.
  std::vector<std::vector<int>> stab(group.begin(), group.end());
  for (int i = 0; i < b_; ++i) {
    std::set<int> orbit;
    for (const auto& e : stab) orbit.insert(e[i]);
    for (int j : orbit)
      if (j != i) levels_[j].lower.push_back(i);
    std::vector<std::vector<int>> next;
    for (auto& e : stab)
      if (e[i] == i) next.push_back(std::move(e));
    stab = std::move(next);
  }
}

double DistinctSum::run(const DenseTensor& t, int open_label, bool open_distinct) const {
  const int n = t.n;
  const int p = t.p;
  require(p == g_.p(), "tensor arity differs from graph regularity");
  const double* data = t.data.data();
  std::vector<std::size_t> stride(p);
  for (int k = 0; k < p; ++k) stride[k] = ipow(n, static_cast<std::size_t>(p - 1 - k));
  // Running flat offset of every vertex; the open leg sits in slot 0.
  std::vector<std::size_t> off(n_vertices_, 0);
  if (open_label >= 0) off[g_.open_vertex()] = static_cast<std::size_t>(open_label) * stride[0];
  // Vertices without closed edges (only an open p = 1 vertex can have none).
  double initial = 1.0;
  for (int v = 0; v < n_vertices_; ++v)
    if (std::all_of(slots_[v].begin(), slots_[v].end(), [](int s) { return s < 0; })) {
      if (n == 0) return 0.0;
      initial *= data[off[v]];
    }
  if (b_ == 0) return initial;
  if (n == 0) return 0.0;

  std::vector<int> label(b_, -1);
  std::vector<char> used(n, 0);
  std::vector<int> taken;  // labels excluded from the last level
  taken.reserve(b_ + 1);
  if (open_label >= 0 && open_distinct) {
    used[open_label] = 1;
    taken.push_back(open_label);
  }
  const Level& last = levels_[b_ - 1];
  const bool last_loop = last.u == last.v;
  const double x_last = last.component >= 0 ? x_[last.component] : 0.0;
  double total = 0.0;

  // The last label of each endpoint sits in its final slot, so its row is contiguous.
  auto innermost = [&](double f_acc, double p_acc) {
    int lo = 0;
    for (int j : last.lower) lo = std::max(lo, label[j] + 1);
    if (lo >= n) return;
    double sum = 0.0;
    int excluded = 0;
    if (!last_loop) {
      const double* ru = data + off[last.u];
      const double* rv = data + off[last.v];
      for (int s = lo; s < n; ++s) sum += ru[s] * rv[s];
      for (int s : taken)
        if (s >= lo) {
          sum -= ru[s] * rv[s];
          ++excluded;
        }
    } else {
      const double* r = data + off[last.u];
      const std::size_t step = static_cast<std::size_t>(n) + 1;
      for (int s = lo; s < n; ++s) sum += r[s * step];
      for (int s : taken)
        if (s >= lo) {
          sum -= r[s * step];
          ++excluded;
        }
    }
    const double count = static_cast<double>(n - lo - excluded);
    total += f_acc * (p_acc * sum + x_last * count);
  };

  auto rec = [&](auto&& self, int level, double f_acc, double p_acc) -> void {
    if (level == b_ - 1) {
      innermost(f_acc, p_acc);
      return;
    }
    const Level& lv = levels_[level];
    int lo = 0;
    for (int j : lv.lower) lo = std::max(lo, label[j] + 1);
    const std::size_t su = stride[lv.slot_u], sv = stride[lv.slot_v];
    for (int s = lo; s < n; ++s) {
      if (used[s]) continue;
      label[level] = s;
      used[s] = 1;
      taken.push_back(s);
      off[lv.u] += s * su;
      off[lv.v] += s * sv;
      double f = f_acc, pr = p_acc;
      for (int v : lv.done) pr *= data[off[v]];
      if (lv.component >= 0) {
        f *= pr + x_[lv.component];
        pr = 1.0;
      }
      if (f != 0.0) self(self, level + 1, f, pr);
      off[lv.u] -= s * su;
      off[lv.v] -= s * sv;
      taken.pop_back();
      used[s] = 0;
    }
    label[level] = -1;
  };
  rec(rec, 0, initial, 1.0);
  return total * factor_;
}

double DistinctSum::closed(const DenseTensor& t) const {
  require(!g_.is_open(), "closed() called on a 1-open graph");
  return run(t, -1, false);
}

Eigen::VectorXd DistinctSum::open(const DenseTensor& t, OpenIndexPolicy policy) const {
  require(g_.is_open(), "open() called on a closed graph");
  Eigen::VectorXd out(t.n);
  for (int i = 0; i < t.n; ++i) out[i] = run(t, i, policy == OpenIndexPolicy::Distinct);
  return out;
}

double distinct_moment(const Multigraph& g, const DenseTensor& t) {
  return DistinctSum(g, CenterVector(component_vertex_sets(g).size(), 0.0)).closed(t);
}

double centered_moment(const Multigraph& g, const DenseTensor& t, const CenterVector& x) {
  return DistinctSum(g, x).closed(t);
}

double distinct_moment(const Multigraph& g, const SymmetricTensor& t) { return distinct_moment(g, t.dense()); }

double centered_moment(const Multigraph& g, const SymmetricTensor& t, const CenterVector& x) {
  return centered_moment(g, t.dense(), x);
}

double centered_moment(const Multigraph& g, const SymmetricTensor& t) {
  return centered_moment(g, t.dense(), default_centers(g));
}

Eigen::VectorXd open_distinct_moment(const Multigraph& g, const SymmetricTensor& t, OpenIndexPolicy policy) {
  return DistinctSum(g, CenterVector(component_vertex_sets(g).size(), 0.0)).open(t.dense(), policy);
}

Eigen::VectorXd open_centered_moment(const Multigraph& g, const SymmetricTensor& t, const CenterVector& x,
                                     OpenIndexPolicy policy) {
  return DistinctSum(g, x).open(t.dense(), policy);
}

Eigen::VectorXd open_centered_moment(const Multigraph& g, const SymmetricTensor& t, OpenIndexPolicy policy) {
  return open_centered_moment(g, t, default_centers(g), policy);
}

}  // namespace tcm
