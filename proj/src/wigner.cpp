// SPDX-License-Identifier: MIT
#include "tcm/wigner.hpp"

#include <algorithm>
#include <deque>
#include <map>
#include <numeric>
#include <unordered_map>

#include "tcm/combinatorics.hpp"
#include "tcm/error.hpp"

namespace tcm {

double coloring_weight(const Multigraph& g, const std::vector<int>& color) {
  const auto edges = g.graph().edges();
  require(color.size() == edges.size(), "one color per edge required");
  std::vector<std::vector<int>> nbhd(g.d());
  for (std::size_t e = 0; e < edges.size(); ++e) {
    nbhd[edges[e].first].push_back(color[e]);
    nbhd[edges[e].second].push_back(color[e]);
  }
  std::map<std::vector<int>, int> census;
  for (auto& s : nbhd) {
    std::sort(s.begin(), s.end());
    ++census[s];
  }
  double weight = 1.0;
  for (const auto& [s, f] : census) {
    if (f % 2) return 0.0;
    double var = 1.0;
    for (std::size_t k = 0; k < s.size();) {
      std::size_t j = k;
      while (j < s.size() && s[j] == s[k]) ++j;
      var *= factorial_d(static_cast<int>(j - k));
      k = j;
    }
    weight *= to_double(double_factorial(f - 1)) * std::pow(var, f / 2);
  }
  return weight;
}

EvenColoringReport even_colorings(const Multigraph& g, WignerLimits limits) {
  require(!g.is_open(), "even colorings take a closed graph");
  const int b = g.edge_count();
  if (b > limits.max_edges)
    throw CapacityError("even-coloring enumeration limited to " + std::to_string(limits.max_edges) + " edges, graph has " +
                        std::to_string(b));
  EvenColoringReport rep;
  rep.count_by_colors.assign(b + 1, 0);
  rep.weight_by_colors.assign(b + 1, 0.0);
  // Restricted growth strings: color[e] <= 1 + max(color[0..e-1]).
  std::vector<int> color(b, 0);
  std::vector<int> prefix_max(b + 1, -1);
  auto visit = [&]() {
    const int colors = prefix_max[b] + 1;
    const double w = coloring_weight(g, color);
    if (w == 0.0) return;
    ++rep.count_by_colors[colors];
    rep.weight_by_colors[colors] += w;
    if (colors > rep.c_max) {
      rep.c_max = colors;
      rep.maximal.clear();
    }
    if (colors == rep.c_max) rep.maximal.push_back(EdgeColoring{color, colors, w});
  };
  auto rec = [&](auto&& self, int e) -> void {
    if (e == b) {
      visit();
      return;
    }
    for (int c = 0; c <= prefix_max[e] + 1; ++c) {
      color[e] = c;
      prefix_max[e + 1] = std::max(prefix_max[e], c);
      self(self, e + 1);
    }
  };
  rec(rec, 0);
  if (rep.c_max >= 0) rep.w_max = rep.weight_by_colors[rep.c_max];
  return rep;
}

double exact_wigner_moment(const Multigraph& g, long n, WignerLimits limits) {
  require(n >= 0, "dimension must be non-negative");
  const auto rep = even_colorings(g, limits);
  double out = 0.0;
  for (std::size_t c = 0; c < rep.weight_by_colors.size(); ++c)
    if (rep.weight_by_colors[c] != 0.0) out += falling(static_cast<double>(n), static_cast<int>(c)) * rep.weight_by_colors[c];
  return out;
}

namespace {

void check_same_degrees(const LabeledGraph& g, const LabeledGraph& h) {
  require(g.size() == h.size(), "switching needs graphs on the same vertex set");
  for (int v = 0; v < g.size(); ++v)
    if (g.degree(v) != h.degree(v)) throw InputError("degree sequences differ; switching distance is undefined");
}

int find(std::vector<int>& parent, int a) {
  while (parent[a] != a) a = parent[a] = parent[parent[a]];
  return a;
}

}  // namespace

int alternating_circuits(const LabeledGraph& g, const LabeledGraph& h) {
  check_same_degrees(g, h);
  const int n = g.size();
  // Half-edges of the difference edges: red from G minus H, blue from H minus G.
  std::vector<std::vector<int>> red(n), blue(n);
  int half = 0;
  std::vector<int> partner;  // the other half of the same edge
  auto add = [&](std::vector<std::vector<int>>& side, int u, int v) {
    side[u].push_back(half);
    side[v].push_back(half + 1);
    partner.push_back(half + 1);
    partner.push_back(half);
    half += 2;
  };
  for (int u = 0; u < n; ++u)
    for (int v = u; v < n; ++v) {
      const int diff = g.mult(u, v) - h.mult(u, v);
      for (int k = 0; k < std::abs(diff); ++k) add(diff > 0 ? red : blue, u, v);
    }
  if (half == 0) return 0;
  double combos = 1.0;
  for (int v = 0; v < n; ++v) {
    require(red[v].size() == blue[v].size(), "difference is not balanced at a vertex");
    combos *= factorial_d(static_cast<int>(red[v].size()));
  }
  if (combos > 2.0e6) throw CapacityError("too many transition systems for the circuit search");
  // Try every pairing of red and blue half-edges at every vertex.
  std::vector<std::vector<int>> perm(n);
  for (int v = 0; v < n; ++v) {
    perm[v].resize(red[v].size());
    std::iota(perm[v].begin(), perm[v].end(), 0);
  }
  int best = 0;
  auto count = [&]() {
    std::vector<int> parent(half);
    std::iota(parent.begin(), parent.end(), 0);
    auto join = [&](int a, int b) { parent[find(parent, a)] = find(parent, b); };
    for (int x = 0; x < half; ++x) join(x, partner[x]);
    for (int v = 0; v < n; ++v)
      for (std::size_t k = 0; k < red[v].size(); ++k) join(red[v][k], blue[v][perm[v][k]]);
    int comps = 0;
    for (int x = 0; x < half; ++x) comps += find(parent, x) == x;
    best = std::max(best, comps);
  };
  auto rec = [&](auto&& self, int v) -> void {
    if (v == n) {
      count();
      return;
    }
    std::sort(perm[v].begin(), perm[v].end());
    do self(self, v + 1);
    while (std::next_permutation(perm[v].begin(), perm[v].end()));
  };
  rec(rec, 0);
  return best;
}

int switching_distance(const LabeledGraph& g, const LabeledGraph& h) {
  check_same_degrees(g, h);
  int diff = 0;
  for (int u = 0; u < g.size(); ++u)
    for (int v = u; v < g.size(); ++v) diff += std::abs(g.mult(u, v) - h.mult(u, v));
  return diff / 2 - alternating_circuits(g, h);
}

int switching_distance_bfs(const LabeledGraph& g, const LabeledGraph& h, std::size_t max_states) {
  check_same_degrees(g, h);
  const std::string target = encode_hex(h);
  std::unordered_map<std::string, int> dist;
  std::deque<LabeledGraph> queue{g};
  dist.emplace(encode_hex(g), 0);
  while (!queue.empty()) {
    const LabeledGraph cur = std::move(queue.front());
    queue.pop_front();
    const int here = dist.at(encode_hex(cur));
    if (encode_hex(cur) == target) return here;
    const auto edges = cur.edges();
    for (std::size_t i = 0; i < edges.size(); ++i)
      for (std::size_t j = i + 1; j < edges.size(); ++j) {
        const auto [a, b] = edges[i];
        const auto [c, d] = edges[j];
        for (int option = 0; option < 2; ++option) {
          LabeledGraph next = cur;
          next.add_edge(a, b, -1);
          next.add_edge(c, d, -1);
          if (option == 0) {
            next.add_edge(a, c);
            next.add_edge(b, d);
          } else {
            next.add_edge(a, d);
            next.add_edge(b, c);
          }
          std::string key = encode_hex(next);
          if (dist.count(key)) continue;
          if (dist.size() >= max_states) return -1;
          dist.emplace(std::move(key), here + 1);
          queue.push_back(std::move(next));
        }
      }
  }
  return -1;
}

int cmax_via_switching(const Multigraph& g, SwitchMethod method) {
  require(!g.is_open(), "c_max takes a closed graph");
  const int d = g.d();
  if (d % 2) throw InputError("no Frobenius cover exists for an odd vertex count; use the coloring route");
  int best = -1;
  std::vector<int> partner(d, -1);
  auto rec = [&](auto&& self) -> void {
    int u = 0;
    while (u < d && partner[u] >= 0) ++u;
    if (u == d) {
      LabeledGraph f(d);
      for (int v = 0; v < d; ++v)
        if (v < partner[v]) f.add_edge(v, partner[v], g.p());
      const int dist = method == SwitchMethod::Formula ? switching_distance(g.graph(), f)
                                                       : switching_distance_bfs(g.graph(), f);
      if (dist < 0) throw CapacityError("switching search exceeded its state cap");
      if (best < 0 || dist < best) best = dist;
      return;
    }
    for (int v = u + 1; v < d; ++v) {
      if (partner[v] >= 0) continue;
      partner[u] = v;
      partner[v] = u;
      self(self);
      partner[u] = partner[v] = -1;
    }
  };
  rec(rec);
  return g.edge_count() - std::max(best, 0);
}

}  // namespace tcm
