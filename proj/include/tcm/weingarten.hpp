// SPDX-License-Identifier: MIT
// Gram matrix of matching vectors, the orthogonal Weingarten function and
// its graph-level sums.
#pragma once

#include <Eigen/Dense>
#include <optional>
#include <unordered_map>
#include <vector>

#include "tcm/combinatorics.hpp"
#include "tcm/matching.hpp"

namespace tcm {

// n^{#cycles(a ∪ b)}.
double gram_entry(const Matching& a, const Matching& b, long n);

struct WeingartenOptions {
  bool exact = false;           // force rational arithmetic (automatic for l <= 8)
  bool pseudo_inverse = false;  // allow n < l/2 through an eigendecomposition
  int max_ell = 12;
  double rank_cutoff = 1e-10;   // relative eigenvalue cutoff for pseudo-inverse mode
};

struct GramDiagnostics {
  double diagonal = 0;         // n^{l/2}
  double offdiag_row_sum = 0;  // sum of one row without the diagonal
  double gershgorin_lower = 0;
  double gershgorin_upper = 0;
  bool bound_regime = false;   // n > l^2
  bool bound_holds = false;    // Gershgorin interval inside n^{l/2}(1 +- l^2/n)
};

class WeingartenTable {
 public:
  WeingartenTable(int ell, long n, WeingartenOptions options = {});

  int ell() const { return ell_; }
  long n() const { return n_; }
  bool is_exact() const { return exact_.has_value(); }
  bool is_pseudo_inverse() const { return pseudo_; }
  // Cycle types as partitions of l/2, in the order of values().
  const std::vector<std::vector<int>>& classes() const { return classes_; }
  const std::vector<double>& values() const { return values_; }
  const std::optional<std::vector<Rational>>& exact_values() const { return exact_; }
  const GramDiagnostics& diagnostics() const { return diag_; }

  int class_index(CycleCode code) const;
  double value(CycleCode code) const { return values_[class_index(code)]; }
  double wg(const Matching& a, const Matching& b) const { return value(cycle_type(a, b)); }
  Rational wg_exact(const Matching& a, const Matching& b) const;

 private:
  int ell_;
  long n_;
  bool pseudo_ = false;
  std::vector<std::vector<int>> classes_;
  std::vector<CycleCode> codes_;
  std::unordered_map<CycleCode, int> index_;
  std::vector<double> values_;
  std::optional<std::vector<Rational>> exact_;
  GramDiagnostics diag_;
};

// Full Gram and Weingarten matrices over all_matchings(l); for tests and small l.
Eigen::MatrixXd gram_matrix(int ell, long n);
Eigen::MatrixXd weingarten_matrix(const WeingartenTable& table);

// Wg_{G,H} for every pair of classes of a realization space:
// #realizations(G) * sum over nu realizing H of Wg(mu0_G, nu).
Eigen::MatrixXd graph_weingarten_matrix(const RealizationSpace& space, const WeingartenTable& table);
std::vector<std::vector<Rational>> graph_weingarten_matrix_exact(const RealizationSpace& space,
                                                                 const WeingartenTable& table);

// Single entries. Graphs with different vertex counts give 0. The fixed
// realizer of G is its `mu0_choice`-th realizing matching.
double graph_weingarten(const Multigraph& g, const Multigraph& h, const WeingartenTable& table,
                        std::size_t mu0_choice = 0);
// 1-open graphs through their chopped degree sequences, l = pd - 1.
double chopped_graph_weingarten(const Multigraph& g, const Multigraph& h, const WeingartenTable& table,
                                std::size_t mu0_choice = 0);
// 1-open graphs through the pendant closure, l = pd + 1.
double pendant_graph_weingarten(const Multigraph& g, const Multigraph& h, const WeingartenTable& table,
                                std::size_t mu0_choice = 0);

}  // namespace tcm
