// SPDX-License-Identifier: MIT
// Exact finite-n low-degree quantities: tensor PCA detection advantage,
// the tensor PCA reconstruction bound, Wigner versus Wishart detection and
// Monte Carlo separation experiments.
#pragma once

#include <Eigen/Dense>
#include <string>
#include <vector>

#include "tcm/cumulants.hpp"
#include "tcm/graph.hpp"
#include "tcm/tensor.hpp"

namespace tcm {

// Contribution of one vertex count d to Adv^2.
struct DegreeTerm {
  int d = 0;
  std::vector<std::string> keys;
  Eigen::VectorXd beta;   // E_P of the normalized centered cumulants
  double exact = 0;       // beta^T M^{-1} beta
  double bound = 0;       // n^{-pd/2} sum_G (E_P kappa^c_G)^2 / |eAut(G)|
  double min_eig = 0;     // spectrum of the normalized Gram M
  double max_eig = 0;
  bool singular = false;
};

struct AdvantageReport {
  std::string model;  // "pca" or "wishart"
  int p = 0;
  long n = 0;
  int D = 0;
  double lambda = 0;  // pca
  long r = 0;         // wishart
  std::string a_spec;
  std::vector<DegreeTerm> degrees;  // degree 0 is implicit (beta = 1)
  double adv2 = 1;                  // exact when exact_available, else the bound sum
  double bound = 1;                 // 1 + sum of the per-degree bounds
  double lower_constant = 1.0 / 3.0;
  double upper_constant = 2.0;
  bool exact_available = true;  // false when some Gram block is singular
  bool certified = true;        // D <= sqrt(n / 2p^2)
  int xi = 0;                   // wishart: degree of the dominant term
  double dominant = 0;          // wishart: the degree-xi term
  bool within_bounds() const { return adv2 >= lower_constant * bound && adv2 <= upper_constant * bound; }
};

bool certified_degree(int p, long n, int D);

// E_P kappa^c_G for the spiked model with ||v||^2 = n.
double pca_beta(const Multigraph& g, long n, double lambda);
AdvantageReport pca_advantage(int p, long n, double lambda, int D);
AdvantageReport pca_advantage(CumulantEngine& engine, double lambda, int D);

// Adv^2(lambda) = 1 + sum_d lambda^{2d} w_d, since beta scales as lambda^d.
struct PcaAdvantageCurve {
  int p = 0;
  long n = 0;
  int D = 0;
  std::vector<int> degrees;
  std::vector<double> exact_weight;
  std::vector<double> bound_weight;
  bool exact_available = true;
  double adv2(double lambda) const;
  double bound(double lambda) const;
  // Smallest lambda with adv2 = level; throws when D has no closed graphs.
  double crossing(double level = 2.0) const;
};
PcaAdvantageCurve pca_advantage_curve(CumulantEngine& engine, int D);

struct CorrelationReport {
  int p = 0;
  long n = 0;
  int D = 0;
  double lambda = 0;
  std::vector<std::string> keys;  // 1-open graphs ordered by (d, key)
  Eigen::MatrixXd R;              // unit upper triangular
  Eigen::VectorXd beta;
  Eigen::VectorXd gamma;  // R^{-T} beta
  double corr2_bound = 0;  // 2 ||gamma||^2
  double mmse_bound = 0;   // n - corr2_bound
  bool certified = true;
};
// p must be odd.
CorrelationReport pca_correlation_bound(int p, long n, double lambda, int D);

// Checks the zero-diagonal and ||A||_F^2 = n^p hypotheses; throws InputError.
void validate_wishart_A(const SymmetricTensor& a, double tol = 1e-9);
// E_P kappa^c_G for the mixture r^{-1/2} sum_j Z_j.A.
double wishart_beta(const Multigraph& g, long r, const SymmetricTensor& a);
int wishart_xi(int p);
AdvantageReport wishart_advantage(long r, int D, const SymmetricTensor& a);
AdvantageReport wishart_advantage(CumulantEngine& engine, long r, int D, const SymmetricTensor& a);

// Least-squares fit log(Adv^2 - 1) = c + a log n - b log r at D = xi.
struct ScalingFit {
  int p = 0;
  int xi = 0;
  std::vector<long> ns;
  std::vector<long> rs;
  Eigen::MatrixXd values;  // Adv^2 - 1, rows by n, columns by r
  double n_slope = 0, r_slope = 0;
  double expected_n_slope = 0, expected_r_slope = 0;
  double n_error() const;  // relative slope errors
  double r_error() const;
};
ScalingFit wishart_scaling_fit(int p, const std::vector<long>& ns, const std::vector<long>& rs);

enum class PlantedModel { Pca, Wishart };

// Statistic sum_i c_i kappa^c_{G_i}(Y).
struct SeparationConfig {
  PlantedModel model = PlantedModel::Pca;
  int p = 2;
  long n = 8;
  double lambda = 0;  // pca
  long r = 1;         // wishart, with A = wishart_like_A(p, n)
  std::vector<Multigraph> graphs;
  std::vector<double> coefficients;  // empty means all ones
  std::size_t trials = 1000;
};

struct SeparationReport {
  double mean_planted = 0, mean_null = 0;
  double var_planted = 0, var_null = 0;
  double predicted = 0;    // exact E_P of the statistic; E_Q is 0
  double separation = 0;   // mean difference over the pooled SD
  double z_agreement = 0;  // (mean difference - predicted) / SE
  std::size_t trials = 0;
};
SeparationReport separation_experiment(const SeparationConfig& config, const SeededRng& rng);

}  // namespace tcm
