// SPDX-License-Identifier: MIT
#include "tcm/graph.hpp"

#include <algorithm>
#include <array>
#include <cstdio>
#include <functional>
#include <map>
#include <numeric>

#include "tcm/combinatorics.hpp"
#include "tcm/error.hpp"

namespace tcm {

LabeledGraph::LabeledGraph(int vertices) : n_(vertices), adj_(static_cast<std::size_t>(vertices) * vertices, 0) {
  require(vertices >= 0, "negative vertex count");
}

void LabeledGraph::add_edge(int u, int v, int count) {
  require(u >= 0 && u < n_ && v >= 0 && v < n_, "edge endpoint out of range");
  adj_[u * n_ + v] += count;
  if (u != v) adj_[v * n_ + u] += count;
}

int LabeledGraph::degree(int v) const {
  int deg = 2 * loops(v);
  for (int w = 0; w < n_; ++w)
    if (w != v) deg += mult(v, w);
  return deg;
}

int LabeledGraph::edge_count() const {
  int b = 0;
  for (int u = 0; u < n_; ++u)
    for (int v = u; v < n_; ++v) b += mult(u, v);
  return b;
}

int LabeledGraph::loop_count() const {
  int c = 0;
  for (int v = 0; v < n_; ++v) c += loops(v);
  return c;
}

std::vector<std::pair<int, int>> LabeledGraph::edges() const {
  std::vector<std::pair<int, int>> out;
  for (int u = 0; u < n_; ++u)
    for (int v = u; v < n_; ++v)
      for (int t = 0; t < mult(u, v); ++t) out.emplace_back(u, v);
  return out;
}

std::vector<std::vector<int>> LabeledGraph::components() const {
  std::vector<int> seen(n_, 0);
  std::vector<std::vector<int>> out;
  for (int s = 0; s < n_; ++s) {
    if (seen[s]) continue;
    std::vector<int> comp{s};
    seen[s] = 1;
    for (std::size_t k = 0; k < comp.size(); ++k) {
      const int u = comp[k];
      for (int w = 0; w < n_; ++w)
        if (!seen[w] && mult(u, w) > 0) {
          seen[w] = 1;
          comp.push_back(w);
        }
    }
    std::sort(comp.begin(), comp.end());
    out.push_back(std::move(comp));
  }
  return out;
}

LabeledGraph LabeledGraph::induced(const std::vector<int>& vertices) const {
  const int m = static_cast<int>(vertices.size());
  LabeledGraph h(m);
  for (int a = 0; a < m; ++a)
    for (int b = 0; b < m; ++b) h.adj_[a * m + b] = mult(vertices[a], vertices[b]);
  return h;
}

LabeledGraph LabeledGraph::relabeled(const std::vector<int>& position) const {
  LabeledGraph h(n_);
  for (int u = 0; u < n_; ++u)
    for (int v = 0; v < n_; ++v) h.adj_[position[u] * n_ + position[v]] = mult(u, v);
  return h;
}

std::string encode_hex(const LabeledGraph& g) {
  std::string s;
  s.reserve(g.adjacency().size() * 2);
  char buf[3];
  for (int x : g.adjacency()) {
    std::snprintf(buf, sizeof buf, "%02x", x & 0xff);
    s += buf;
  }
  return s;
}

namespace {

// Dense ranks of arbitrary comparable keys.
template <class Key>
std::vector<int> dense_ranks(const std::vector<Key>& keys) {
  const int n = static_cast<int>(keys.size());
  std::vector<int> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](int a, int b) { return keys[a] < keys[b]; });
  std::vector<int> rank(n, 0);
  for (int k = 1; k < n; ++k)
    rank[order[k]] = rank[order[k - 1]] + (keys[order[k - 1]] < keys[order[k]] ? 1 : 0);
  return rank;
}

int class_count(const std::vector<int>& ranks) {
  return ranks.empty() ? 0 : *std::max_element(ranks.begin(), ranks.end()) + 1;
}

// Equitable refinement: split cells by neighbor color multiplicities.
std::vector<int> refine(const LabeledGraph& g, std::vector<int> color) {
  const int n = g.size();
  int classes = class_count(color);
  while (true) {
    std::vector<std::vector<int>> sig(n);
    for (int v = 0; v < n; ++v) {
      std::vector<std::pair<int, int>> nb;
      for (int w = 0; w < n; ++w)
        if (w != v && g.mult(v, w) > 0) nb.emplace_back(color[w], g.mult(v, w));
      std::sort(nb.begin(), nb.end());
      sig[v].push_back(color[v]);
      for (auto [c, m] : nb) {
        sig[v].push_back(c);
        sig[v].push_back(m);
      }
    }
    auto next = dense_ranks(sig);
    const int next_classes = class_count(next);
    if (next_classes == classes) return next;
    color = std::move(next);
    classes = next_classes;
  }
}

struct ConnectedCanon {
  std::string encoding;
  std::vector<int> position;
  std::vector<std::vector<int>> best_leaves;  // positions of all optimal leaves (capped)
  std::uint64_t automorphisms = 0;
};

std::string leaf_encoding(const LabeledGraph& g, const std::vector<int>& user_colors,
                          const std::vector<int>& position) {
  const int n = g.size();
  std::string s(static_cast<std::size_t>(n) + static_cast<std::size_t>(n) * n, '\0');
  for (int v = 0; v < n; ++v) s[position[v]] = static_cast<char>(user_colors[v]);
  for (int u = 0; u < n; ++u)
    for (int v = 0; v < n; ++v)
      s[n + position[u] * n + position[v]] = static_cast<char>(g.mult(u, v));
  return s;
}

// Individualization-refinement search over the full tree.
ConnectedCanon canonical_connected(const LabeledGraph& g, const std::vector<int>& user_colors,
                                   std::size_t leaf_cap) {
  const int n = g.size();
  ConnectedCanon out;
  std::vector<std::array<int, 3>> init(n);
  for (int v = 0; v < n; ++v) init[v] = {user_colors[v], g.loops(v), g.degree(v)};
  std::function<void(std::vector<int>)> search = [&](std::vector<int> color) {
    color = refine(g, std::move(color));
    int cell = -1;
    std::vector<int> counts(n, 0);
    for (int v = 0; v < n; ++v) ++counts[color[v]];
    for (int c = 0; c < n; ++c)
      if (counts[c] > 1) {
        cell = c;
        break;
      }
    if (cell < 0) {
      std::string enc = leaf_encoding(g, user_colors, color);
      if (out.automorphisms == 0 || enc < out.encoding) {
        out.encoding = std::move(enc);
        out.position = color;
        out.best_leaves.clear();
        out.best_leaves.push_back(color);
        out.automorphisms = 1;
      } else if (enc == out.encoding) {
        ++out.automorphisms;
        if (out.best_leaves.size() < leaf_cap) out.best_leaves.push_back(color);
      }
      return;
    }
    for (int v = 0; v < n; ++v) {
      if (color[v] != cell) continue;
      std::vector<int> next = color;
      for (int w = 0; w < n; ++w) {
        if (next[w] > cell) ++next[w];
        else if (next[w] == cell && w != v) next[w] = cell + 1;
      }
      search(std::move(next));
    }
  };
  search(dense_ranks(init));
  return out;
}

struct ComponentCanon {
  std::vector<int> vertices;
  ConnectedCanon canon;
};

std::vector<ComponentCanon> canonical_components(const LabeledGraph& g, const std::vector<int>& colors,
                                                 std::size_t leaf_cap) {
  std::vector<ComponentCanon> comps;
  for (auto& verts : g.components()) {
    std::vector<int> sub_colors;
    for (int v : verts) sub_colors.push_back(colors[v]);
    ComponentCanon cc{verts, canonical_connected(g.induced(verts), sub_colors, leaf_cap)};
    comps.push_back(std::move(cc));
  }
  std::stable_sort(comps.begin(), comps.end(), [](const ComponentCanon& a, const ComponentCanon& b) {
    if (a.vertices.size() != b.vertices.size()) return a.vertices.size() < b.vertices.size();
    return a.canon.encoding < b.canon.encoding;
  });
  return comps;
}

bool same_type(const ComponentCanon& a, const ComponentCanon& b) {
  return a.vertices.size() == b.vertices.size() && a.canon.encoding == b.canon.encoding;
}

std::vector<int> normalized_colors(const LabeledGraph& g, const std::vector<int>& colors) {
  if (colors.empty()) return std::vector<int>(g.size(), 0);
  require(static_cast<int>(colors.size()) == g.size(), "vertex color count mismatch");
  return colors;
}

}  // namespace

CanonicalForm canonicalize(const LabeledGraph& g, const std::vector<int>& colors_in) {
  const auto colors = normalized_colors(g, colors_in);
  const auto comps = canonical_components(g, colors, 1);
  CanonicalForm out;
  out.position.assign(g.size(), 0);
  out.automorphisms = 1;
  int offset = 0;
  for (std::size_t i = 0; i < comps.size(); ++i) {
    const auto& cc = comps[i];
    for (std::size_t k = 0; k < cc.vertices.size(); ++k)
      out.position[cc.vertices[k]] = offset + cc.canon.position[k];
    offset += static_cast<int>(cc.vertices.size());
    out.automorphisms *= cc.canon.automorphisms;
  }
  for (std::size_t i = 0; i < comps.size();) {
    std::size_t j = i;
    while (j < comps.size() && same_type(comps[i], comps[j])) ++j;
    out.automorphisms *= to_u64(factorial(static_cast<int>(j - i)));
    i = j;
  }
  out.graph = g.relabeled(out.position);
  out.colors.assign(g.size(), 0);
  for (int v = 0; v < g.size(); ++v) out.colors[out.position[v]] = colors[v];
  out.encoding = leaf_encoding(g, colors, out.position);
  return out;
}

std::optional<std::vector<std::vector<int>>> automorphism_group(const LabeledGraph& g,
                                                                const std::vector<int>& colors_in,
                                                                std::size_t cap) {
  const auto colors = normalized_colors(g, colors_in);
  const auto comps = canonical_components(g, colors, cap + 1);
  const int n = g.size();
  // Per component: automorphisms in local indices, and inverse canonical position.
  std::vector<std::vector<std::vector<int>>> local_auts(comps.size());
  std::vector<std::vector<int>> inverse_pos(comps.size());
  double total = 1.0;
  for (std::size_t c = 0; c < comps.size(); ++c) {
    const auto& canon = comps[c].canon;
    if (canon.automorphisms > cap) return std::nullopt;
    total *= static_cast<double>(canon.automorphisms);
    const int m = static_cast<int>(comps[c].vertices.size());
    inverse_pos[c].assign(m, 0);
    for (int k = 0; k < m; ++k) inverse_pos[c][canon.position[k]] = k;
    for (const auto& leaf : canon.best_leaves) {
      // alpha(k) = position^{-1}(leaf(k)) maps the graph onto itself.
      std::vector<int> alpha(m);
      for (int k = 0; k < m; ++k) alpha[k] = inverse_pos[c][leaf[k]];
      local_auts[c].push_back(std::move(alpha));
    }
  }
  std::vector<std::pair<std::size_t, std::size_t>> groups;
  for (std::size_t i = 0; i < comps.size();) {
    std::size_t j = i;
    while (j < comps.size() && same_type(comps[i], comps[j])) ++j;
    groups.emplace_back(i, j);
    total *= to_double(factorial(static_cast<int>(j - i)));
    i = j;
  }
  if (total > static_cast<double>(cap)) return std::nullopt;

  std::vector<std::vector<int>> result{std::vector<int>(n)};
  std::iota(result[0].begin(), result[0].end(), 0);
  for (auto [lo, hi] : groups) {
    const std::size_t m = hi - lo;
    std::vector<int> tau(m);
    std::iota(tau.begin(), tau.end(), 0);
    std::vector<std::vector<int>> partials;
    do {
      // Choose one automorphism per component, then send component k to tau[k].
      std::vector<std::vector<int>> acc{std::vector<int>()};
      for (std::size_t k = 0; k < m; ++k) {
        std::vector<std::vector<int>> next;
        for (const auto& prefix : acc)
          for (std::size_t a = 0; a < local_auts[lo + k].size(); ++a) {
            auto ext = prefix;
            ext.push_back(static_cast<int>(a));
            next.push_back(std::move(ext));
          }
        acc = std::move(next);
      }
      for (const auto& choice : acc) {
        std::vector<int> perm(n, -1);
        for (std::size_t k = 0; k < m; ++k) {
          const auto& src = comps[lo + k];
          const auto& dst = comps[lo + tau[k]];
          const auto& alpha = local_auts[lo + k][choice[k]];
          for (std::size_t v = 0; v < src.vertices.size(); ++v) {
            const int image_local = alpha[v];
            const int canon_index = src.canon.position[image_local];
            perm[src.vertices[v]] = dst.vertices[inverse_pos[lo + tau[k]][canon_index]];
          }
        }
        partials.push_back(std::move(perm));
      }
    } while (std::next_permutation(tau.begin(), tau.end()));
    std::vector<std::vector<int>> combined;
    for (const auto& base : result)
      for (const auto& part : partials) {
        auto perm = base;
        for (int v = 0; v < n; ++v)
          if (part[v] >= 0) perm[v] = part[v];
        combined.push_back(std::move(perm));
      }
    result = std::move(combined);
  }
  return result;
}

std::uint64_t edge_automorphisms(const LabeledGraph& g, const std::vector<int>& colors) {
  std::uint64_t e = canonicalize(g, colors).automorphisms;
  for (int u = 0; u < g.size(); ++u) {
    e <<= g.loops(u);
    for (int v = u; v < g.size(); ++v) e *= to_u64(factorial(g.mult(u, v)));
  }
  return e;
}

Multigraph::Multigraph(int p, LabeledGraph g, int open_vertex) : p_(p), g_(std::move(g)), open_(open_vertex) {
  require(p >= 1, "regularity p must be positive");
  require(open_ >= -1 && open_ < g_.size(), "open vertex out of range");
  for (int v = 0; v < g_.size(); ++v) {
    const int want = (v == open_) ? p - 1 : p;
    if (g_.degree(v) != want)
      throw InputError("vertex " + std::to_string(v) + " has degree " + std::to_string(g_.degree(v)) +
                       ", expected " + std::to_string(want));
  }
  const auto canon = canonicalize(g_, vertex_colors());
  aut_ = canon.automorphisms;
  position_ = canon.position;
  key_ = "p" + std::to_string(p_) + "d" + std::to_string(d()) + (is_open() ? "o:" : ":") + encode_hex(canon.graph);
}

Multigraph Multigraph::from_edges(int p, int d, const std::vector<std::pair<int, int>>& edges, int open_vertex) {
  LabeledGraph g(d);
  for (auto [u, v] : edges) g.add_edge(u, v);
  return Multigraph(p, std::move(g), open_vertex);
}

std::vector<int> Multigraph::vertex_colors() const {
  std::vector<int> c(g_.size(), 0);
  if (open_ >= 0) c[open_] = 1;
  return c;
}

std::uint64_t Multigraph::eaut() const {
  std::uint64_t e = aut_;
  for (int u = 0; u < g_.size(); ++u) {
    e <<= g_.loops(u);
    for (int v = u; v < g_.size(); ++v) e *= to_u64(factorial(g_.mult(u, v)));
  }
  return e;
}

Multigraph Multigraph::canonical() const {
  return Multigraph(p_, g_.relabeled(position_), open_ >= 0 ? position_[open_] : -1);
}

LabeledGraph chop(const Multigraph& g) { return g.graph(); }

Multigraph attach_open(int p, const LabeledGraph& chopped, int v) { return Multigraph(p, chopped, v); }

bool is_frobenius(const Multigraph& g) { return !g.is_open() && g.d() == 2 && g.mult(0, 1) == g.p(); }

int ComponentDecomposition::count() const {
  int c = 0;
  for (const auto& comp : components) c += comp.multiplicity;
  return c;
}

std::vector<std::vector<int>> component_vertex_sets(const Multigraph& g) { return g.graph().components(); }

Multigraph induced_subgraph(const Multigraph& g, const std::vector<int>& vertices) {
  std::vector<int> verts = vertices;
  std::sort(verts.begin(), verts.end());
  int open = -1;
  for (std::size_t k = 0; k < verts.size(); ++k)
    if (verts[k] == g.open_vertex()) open = static_cast<int>(k);
  return Multigraph(g.p(), g.graph().induced(verts), open);
}

ComponentDecomposition decompose(const Multigraph& g) {
  std::map<std::string, ComponentInfo> by_key;
  for (const auto& verts : component_vertex_sets(g)) {
    Multigraph comp = induced_subgraph(g, verts).canonical();
    auto it = by_key.find(comp.key());
    if (it != by_key.end()) {
      ++it->second.multiplicity;
      continue;
    }
    ComponentInfo info;
    info.is_frobenius = is_frobenius(comp);
    info.has_loop = comp.graph().loop_count() > 0;
    info.is_open = comp.is_open();
    info.size = comp.d();
    info.graph = std::move(comp);
    by_key.emplace(info.graph.key(), std::move(info));
  }
  ComponentDecomposition out;
  for (auto& [k, info] : by_key) out.components.push_back(std::move(info));
  return out;
}

Multigraph disjoint_union(const Multigraph& a, const Multigraph& b) {
  require(a.p() == b.p(), "disjoint union of graphs with different p");
  require(!(a.is_open() && b.is_open()), "disjoint union of two open graphs is not 1-open");
  const int da = a.d();
  LabeledGraph g(da + b.d());
  for (auto [u, v] : a.graph().edges()) g.add_edge(u, v);
  for (auto [u, v] : b.graph().edges()) g.add_edge(da + u, da + v);
  const int open = a.is_open() ? a.open_vertex() : (b.is_open() ? da + b.open_vertex() : -1);
  return Multigraph(a.p(), std::move(g), open);
}

std::uint64_t count_assignments(const Multigraph& g, int r) {
  require(r >= 1, "bin count must be positive");
  std::uint64_t out = 1;
  const auto comps = component_vertex_sets(g).size();
  for (std::size_t k = 0; k < comps; ++k) out *= static_cast<std::uint64_t>(r);
  return out;
}

}  // namespace tcm
