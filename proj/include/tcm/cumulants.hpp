// SPDX-License-Identifier: MIT
// Tensor free cumulants: exact Weingarten expansions, centered and
// normalized variants, 1-open analogues, Monte Carlo Haar estimators,
// inner products, Gram blocks and additivity checks.
#pragma once

#include <Eigen/Dense>
#include <map>
#include <memory>
#include <string>
#include <vector>

#include "tcm/contraction.hpp"
#include "tcm/graph.hpp"
#include "tcm/matching.hpp"
#include "tcm/tensor.hpp"
#include "tcm/weingarten.hpp"

namespace tcm {

enum class BasisKind {
  Closed,       // p-regular closed graphs, l = pd
  OpenPendant,  // 1-open graphs, open index distinct from closed ones, l = pd + 1
  OpenChopped   // 1-open graphs, open index free, l = pd - 1
};

BasisKind open_kind(OpenIndexPolicy policy);

// One vertex-count block of the cumulant basis at fixed (p, n).
struct CumulantBlock {
  BasisKind kind = BasisKind::Closed;
  int p = 0;
  int d = 0;
  long n = 0;
  int edges = 0;         // labels summed injectively: b, b with the open edge, or b - 1
  double labeled = 1;    // labeled half-edge arrangements: p!^d d! or p!^{d-1} (p-1)! (d-1)!
  double falling_b = 1;  // n^{underline edges}
  std::vector<GraphClass> classes;
  Eigen::MatrixXd wg;    // graph Weingarten matrix over classes
  std::map<std::string, int> index;

  int size() const { return static_cast<int>(classes.size()); }
  int index_of(const Multigraph& g) const;
  // kappa = coefficients * (moments of the block graphs).
  Eigen::MatrixXd coefficients() const;
  // Raw inner products E kappa^c_G kappa^c_H under the Wigner law.
  Eigen::MatrixXd inner() const;
  // Gram of the normalized basis.
  Eigen::MatrixXd gram() const;
  // kappa-hat = normalization(G) * kappa^c.
  double normalization(int i) const;
};

struct McEstimate {
  double mean = 0;
  double se = 0;
  std::size_t trials = 0;
  double z(double expected) const;
};

struct McVector {
  Eigen::VectorXd mean;
  Eigen::VectorXd se;
  std::size_t trials = 0;
  double max_abs_z(const Eigen::VectorXd& expected) const;
};

// Caches Weingarten tables and basis blocks for one (p, n).
class CumulantEngine {
 public:
  CumulantEngine(int p, long n, WeingartenOptions options = {}, EnumerationLimits limits = {});
  int p() const { return p_; }
  long n() const { return n_; }

  const CumulantBlock& block(int d, BasisKind kind = BasisKind::Closed);
  const WeingartenTable& table(int ell);

  // kappa_G for every closed graph of block d.
  Eigen::VectorXd kappa_block(int d, const SymmetricTensor& t);
  double kappa(const Multigraph& g, const SymmetricTensor& t);
  // Sum over subsets S of centered components: prod x_C (n - b + b_S)^{underline b_S} kappa_{G \ S}.
  double centered(const Multigraph& g, const SymmetricTensor& t, const CenterVector& x);
  double centered(const Multigraph& g, const SymmetricTensor& t);
  double normalized(const Multigraph& g, const SymmetricTensor& t);

  Eigen::VectorXd open_kappa(const Multigraph& g, const SymmetricTensor& t, OpenIndexPolicy policy);
  Eigen::VectorXd open_centered(const Multigraph& g, const SymmetricTensor& t, const CenterVector& x,
                                OpenIndexPolicy policy);
  Eigen::VectorXd open_centered(const Multigraph& g, const SymmetricTensor& t, OpenIndexPolicy policy);

  double inner(const Multigraph& g, const Multigraph& h);
  double open_inner(const Multigraph& g, const Multigraph& h, OpenIndexPolicy policy);
  double normalization(const Multigraph& g, OpenIndexPolicy policy = OpenIndexPolicy::Distinct);

 private:
  int p_;
  long n_;
  WeingartenOptions options_;
  EnumerationLimits limits_;
  std::map<int, std::unique_ptr<WeingartenTable>> tables_;
  std::map<std::pair<int, int>, std::unique_ptr<CumulantBlock>> blocks_;
};

// Single-graph entry points matching the table-based formulas.
double cumulant_exact(const Multigraph& g, const SymmetricTensor& t, const WeingartenTable& table);
double centered_cumulant(const Multigraph& g, const SymmetricTensor& t, CumulantEngine& engine);
// lambda^d ||v||^{2b} n^{underline b} / (n + 2b - 2)^{double underline b}.
double spike_cumulant(const Multigraph& g, long n, double norm2, double lambda = 1.0);

// Monte Carlo over Haar Q of the fixed-labeling estimator
// n^{underline b} prod_C (prod_{v in C} (Q.T)_{j(dv)} + x_C).
McEstimate cumulant_mc(const Multigraph& g, const SymmetricTensor& t, std::size_t trials, const SeededRng& rng);
McEstimate cumulant_mc(const Multigraph& g, const SymmetricTensor& t, const CenterVector& x, std::size_t trials,
                       const SeededRng& rng);
// Several graphs sharing each Haar draw.
std::vector<McEstimate> cumulant_mc(const std::vector<Multigraph>& graphs, const std::vector<CenterVector>& centers,
                                    const SymmetricTensor& t, std::size_t trials, const SeededRng& rng);
// E_Q Q m_{G->}(Q.T) with the same fixed-labeling reduction.
McVector open_cumulant_mc(const Multigraph& g, const SymmetricTensor& t, const CenterVector& x,
                          OpenIndexPolicy policy, std::size_t trials, const SeededRng& rng);

// First k columns of a Haar orthogonal matrix.
Eigen::MatrixXd sample_haar_columns(int n, int k, Engine& rng);

struct CumulantGram {
  BasisKind kind = BasisKind::Closed;
  int p = 0, d = 0;
  long n = 0;
  std::vector<std::string> keys;
  Eigen::MatrixXd matrix;
  Eigen::VectorXd eigenvalues;  // ascending
  std::string provenance = "exact-weingarten";
};
CumulantGram build_gram(CumulantEngine& engine, int d, BasisKind kind = BasisKind::Closed);

struct AdditivityReport {
  McEstimate mc;          // E_Q kappa_G(A + Q.B)
  double predicted = 0;   // component-subset formula
  double z = 0;
  bool connected = true;
};
AdditivityReport verify_additivity(const Multigraph& g, const SymmetricTensor& a, const SymmetricTensor& b,
                                   std::size_t trials, const SeededRng& rng, CumulantEngine& engine);
// Component-subset prediction of E_Q kappa_G(A + Q.B).
double additivity_prediction(const Multigraph& g, const SymmetricTensor& a, const SymmetricTensor& b,
                             CumulantEngine& engine);

}  // namespace tcm
