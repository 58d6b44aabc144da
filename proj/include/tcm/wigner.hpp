// SPDX-License-Identifier: MIT
// Exact Wigner graph moments through even edge colorings, the maximal
// color count c_max, and its dual through switching distance to Frobenius covers.
#pragma once

#include <cstdint>
#include <vector>

#include "tcm/graph.hpp"

namespace tcm {

// A coloring assigns each edge of LabeledGraph::edges() a color in [0, colors).
struct EdgeColoring {
  std::vector<int> color;
  int colors = 0;
  double weight = 0;  // prod over neighborhood classes S of (f_S - 1)!! (prod_j c_j!)^{f_S / 2}
};

struct EvenColoringReport {
  int c_max = -1;     // -1 when no even coloring exists
  double w_max = 0;   // total weight of the colorings with c_max colors
  // Colorings with c_max colors. Weights above 1 occur, e.g. for loops or two disjoint triangles.
  std::vector<EdgeColoring> maximal;
  // Number of even colorings by color count (index = colors).
  std::vector<std::uint64_t> count_by_colors;
  // Total weight by color count; E m_G(W) = sum_c n^{underline c} weight_by_colors[c].
  std::vector<double> weight_by_colors;
};

struct WignerLimits {
  int max_edges = 8;  // Bell(8) = 4140 partitions
};

// Weight of a coloring, or 0 when it is not even.
double coloring_weight(const Multigraph& g, const std::vector<int>& color);
EvenColoringReport even_colorings(const Multigraph& g, WignerLimits limits = {});
// E m_G(W) for W ~ Wig(p, n, 1).
double exact_wigner_moment(const Multigraph& g, long n, WignerLimits limits = {});

// Edge multiset G minus H and H minus G contain alternating circuits; circ is the
// largest number of circuits in a decomposition of their union.
int alternating_circuits(const LabeledGraph& g, const LabeledGraph& h);
// (1/2)|E(G xor H)| - circ(G, H).
int switching_distance(const LabeledGraph& g, const LabeledGraph& h);
// Breadth-first search over single switchings; -1 if the cap on visited states is reached.
int switching_distance_bfs(const LabeledGraph& g, const LabeledGraph& h, std::size_t max_states = 2000000);

enum class SwitchMethod { Formula, Bfs };
// |E(G)| - min over Frobenius covers F of d_switch(G, F); needs an even vertex count.
int cmax_via_switching(const Multigraph& g, SwitchMethod method = SwitchMethod::Formula);

}  // namespace tcm
