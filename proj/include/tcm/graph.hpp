// SPDX-License-Identifier: MIT
// Regular multigraphs with loops: storage, canonical form, automorphisms,
// component decomposition and 1-open variants.
#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace tcm {

// Undirected multigraph on vertices [0, size). The diagonal of the adjacency
// holds the number of loops at a vertex; each loop adds 2 to the degree.
class LabeledGraph {
 public:
  LabeledGraph() = default;
  explicit LabeledGraph(int vertices);

  int size() const { return n_; }
  int mult(int u, int v) const { return adj_[u * n_ + v]; }
  int loops(int v) const { return adj_[v * n_ + v]; }
  void add_edge(int u, int v, int count = 1);

  int degree(int v) const;
  int edge_count() const;
  int loop_count() const;
  // Edges with u <= v, each repeated by its multiplicity.
  std::vector<std::pair<int, int>> edges() const;
  // Vertex sets of connected components, each sorted, ordered by smallest vertex.
  std::vector<std::vector<int>> components() const;
  LabeledGraph induced(const std::vector<int>& vertices) const;
  // Vertex v moves to position[v].
  LabeledGraph relabeled(const std::vector<int>& position) const;
  const std::vector<int>& adjacency() const { return adj_; }

  bool operator==(const LabeledGraph&) const = default;

 private:
  int n_ = 0;
  std::vector<int> adj_;
};

// Row-major adjacency, two lowercase hex digits per entry.
std::string encode_hex(const LabeledGraph& g);

struct CanonicalForm {
  LabeledGraph graph;             // canonically relabeled graph
  std::vector<int> position;      // position[v] = canonical index of v
  std::vector<int> colors;        // vertex colors in canonical order
  std::uint64_t automorphisms = 1;
  std::string encoding;           // colors and adjacency, comparable across graphs
};

// Canonical labeling respecting optional vertex colors (empty = uncolored).
CanonicalForm canonicalize(const LabeledGraph& g, const std::vector<int>& colors = {});

// All color-preserving vertex automorphisms as permutations (perm[v] = image),
// or nullopt when the group has more than `cap` elements.
std::optional<std::vector<std::vector<int>>> automorphism_group(
    const LabeledGraph& g, const std::vector<int>& colors = {}, std::size_t cap = 100000);

// 2^loops * prod(bundle multiplicity)! * |Aut|.
std::uint64_t edge_automorphisms(const LabeledGraph& g, const std::vector<int>& colors = {});

// p-regular multigraph, optionally 1-open: the open vertex has closed degree
// p - 1 and carries one dangling edge.
class Multigraph {
 public:
  Multigraph() = default;
  Multigraph(int p, LabeledGraph g, int open_vertex = -1);
  static Multigraph from_edges(int p, int d, const std::vector<std::pair<int, int>>& edges,
                               int open_vertex = -1);
  static Multigraph empty(int p) { return Multigraph(p, LabeledGraph(0)); }

  int p() const { return p_; }
  int d() const { return g_.size(); }
  bool is_open() const { return open_ >= 0; }
  int open_vertex() const { return open_; }
  // Closed edges only, i.e. chop(G) for open graphs.
  const LabeledGraph& graph() const { return g_; }
  int mult(int u, int v) const { return g_.mult(u, v); }
  int closed_edge_count() const { return g_.edge_count(); }
  // b: all edges including the open one.
  int edge_count() const { return g_.edge_count() + (is_open() ? 1 : 0); }

  // "p{p}d{d}:" or "p{p}d{d}o:" followed by the canonical adjacency in hex.
  const std::string& key() const { return key_; }
  std::uint64_t aut() const { return aut_; }
  // For open graphs this is |eAut(chop G)|.
  std::uint64_t eaut() const;
  Multigraph canonical() const;
  // Vertex colors used for canonical forms (marks the open vertex).
  std::vector<int> vertex_colors() const;

  bool operator==(const Multigraph& o) const { return key_ == o.key_; }

 private:
  int p_ = 0;
  LabeledGraph g_;
  int open_ = -1;
  std::string key_;
  std::uint64_t aut_ = 1;
  std::vector<int> position_;
};

// Closed graph with the open edge deleted (degree sequence p-1, p, ..., p).
LabeledGraph chop(const Multigraph& g);
// Re-attach an open edge at vertex v of a chopped graph.
Multigraph attach_open(int p, const LabeledGraph& chopped, int v);

bool is_frobenius(const Multigraph& g);

struct ComponentInfo {
  Multigraph graph;  // canonical component; open if it carries the open edge
  int multiplicity = 1;
  bool is_frobenius = false;
  bool has_loop = false;
  bool is_open = false;
  int size = 0;
};

struct ComponentDecomposition {
  std::vector<ComponentInfo> components;  // sorted by key
  int count() const;
};

ComponentDecomposition decompose(const Multigraph& g);

// Labeled components of g: vertex sets, sorted by smallest vertex. This order
// indexes CenterVector entries.
std::vector<std::vector<int>> component_vertex_sets(const Multigraph& g);
// Subgraph induced by a union of components.
Multigraph induced_subgraph(const Multigraph& g, const std::vector<int>& vertices);
Multigraph disjoint_union(const Multigraph& a, const Multigraph& b);

// r^{|conn(G)|}.
std::uint64_t count_assignments(const Multigraph& g, int r);

}  // namespace tcm
