// SPDX-License-Identifier: MIT
// Graph moments of symmetric tensors: closed, open and mixed contractions,
// distinct-index sums and centered sums.
#pragma once

#include <Eigen/Dense>
#include <vector>

#include "tcm/graph.hpp"
#include "tcm/tensor.hpp"

namespace tcm {

// One pairwise contraction of the current factor list. Factors are numbered
// as created: vertex factors first, then one new factor per step.
struct ContractionStep {
  int left = 0;
  int right = 0;
  std::vector<int> result_legs;
  double cost = 0;  // n^{live indices}
};

struct ContractionPlan {
  std::vector<std::vector<int>> factor_legs;  // legs of the initial factors after self-traces
  std::vector<ContractionStep> steps;
  std::vector<int> output_legs;
  double cost = 0;
  int max_arity = 0;
};

// Edge labels: closed edges get 0..b-1 in LabeledGraph::edges() order; an
// open edge of vertex v gets label b + k for the k-th open leg.
ContractionPlan plan_contraction(const LabeledGraph& g, const std::vector<int>& open_legs_per_vertex, int n);

// Contract a network where vertex v carries a dense tensor whose arity is its
// degree plus its open legs. Returns the output tensor over the open legs.
DenseTensor contract_network(const LabeledGraph& g, const std::vector<int>& open_legs_per_vertex,
                             const std::vector<const DenseTensor*>& tensors);

double moment(const Multigraph& g, const SymmetricTensor& t);
double moment(const Multigraph& g, const DenseTensor& t);
Eigen::VectorXd open_moment(const Multigraph& g, const SymmetricTensor& t);
Eigen::VectorXd open_moment(const Multigraph& g, const DenseTensor& t);
// Vertex v carries tensors[v] with arity degree(v).
double mixed_moment(const LabeledGraph& g, const std::vector<const DenseTensor*>& tensors);

// One center per labeled component (component_vertex_sets order). The
// centered factor of component C is (product over C + x_C).
using CenterVector = std::vector<double>;
// -1 on closed Frobenius components, 0 elsewhere.
CenterVector default_centers(const Multigraph& g);
// -1/r on closed Frobenius components (per-bin Wishart preset).
CenterVector wishart_centers(const Multigraph& g, int r);

enum class OpenIndexPolicy {
  Distinct,  // the open index differs from every closed-edge index
  Free       // the open index ranges over all of [n]
};

double distinct_moment(const Multigraph& g, const SymmetricTensor& t);
double centered_moment(const Multigraph& g, const SymmetricTensor& t, const CenterVector& x);
double centered_moment(const Multigraph& g, const SymmetricTensor& t);
double distinct_moment(const Multigraph& g, const DenseTensor& t);
double centered_moment(const Multigraph& g, const DenseTensor& t, const CenterVector& x);

Eigen::VectorXd open_distinct_moment(const Multigraph& g, const SymmetricTensor& t,
                                     OpenIndexPolicy policy = OpenIndexPolicy::Distinct);
// The component carrying the open edge is never centered.
Eigen::VectorXd open_centered_moment(const Multigraph& g, const SymmetricTensor& t, const CenterVector& x,
                                     OpenIndexPolicy policy = OpenIndexPolicy::Distinct);
Eigen::VectorXd open_centered_moment(const Multigraph& g, const SymmetricTensor& t,
                                     OpenIndexPolicy policy = OpenIndexPolicy::Distinct);

// Reusable evaluator of injective-label sums for one graph. Labelings are
// visited once per orbit of the edge automorphism group when x is invariant.
class DistinctSum {
 public:
  DistinctSum(const Multigraph& g, const CenterVector& x, bool use_symmetry = true);
  double closed(const DenseTensor& t) const;
  Eigen::VectorXd open(const DenseTensor& t, OpenIndexPolicy policy) const;
  // Number of orbit representatives merged into one visited labeling.
  double symmetry_factor() const { return factor_; }

 private:
  struct Level {
    int u = 0, v = 0;               // endpoints of the edge labeled at this level
    int slot_u = -1, slot_v = -1;   // tensor slots of the label at u and at v
    std::vector<int> lower;         // earlier levels whose labels must be smaller
    std::vector<int> done;          // vertices completed at this level
    int component = -1;             // component completed at this level, or -1
  };
  double run(const DenseTensor& t, int open_label, bool open_distinct) const;

  Multigraph g_;
  CenterVector x_;
  int n_vertices_ = 0;
  int b_ = 0;
  std::vector<Level> levels_;
  std::vector<std::vector<int>> slots_;  // per vertex: incident levels, -1 for the open leg
  double factor_ = 1.0;
};

}  // namespace tcm
