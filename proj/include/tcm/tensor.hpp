// SPDX-License-Identifier: MIT
// Symmetric tensors stored over sorted multisets, seeded randomness and the
// random ensembles: Wigner, Haar, Ginibre, spikes and Wishart-like mixtures.
#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <memory>
#include <random>
#include <vector>

namespace tcm {

// Shared index tables for one (p, n).
struct MultisetIndex {
  int p = 0;
  int n = 0;
  std::vector<int> multisets;          // size() * p entries, each sorted
  std::vector<double> orbit;           // p! / prod c_j!
  std::vector<double> repeat_product;  // prod c_j!
  std::vector<std::uint32_t> dense_to_rank;  // n^p entries
  std::size_t size() const { return orbit.size(); }
};
std::shared_ptr<const MultisetIndex> multiset_index(int p, int n);

// Dense array of n^p values, first index slowest.
struct DenseTensor {
  int p = 0;
  int n = 0;
  std::vector<double> data;
};

// Symmetric p-ary tensor in dimension n. Values are stored once per multiset
// in colex order of the strictly increasing transform (i_k + k).
class SymmetricTensor {
 public:
  SymmetricTensor() = default;
  SymmetricTensor(int p, int n);

  int p() const { return p_; }
  int n() const { return n_; }
  std::size_t size() const { return values_.size(); }
  const std::vector<double>& values() const { return values_; }
  std::vector<double>& values() { return values_; }
  const MultisetIndex& index() const { return *index_; }

  // Any index order is accepted.
  double at(const std::vector<int>& idx) const;
  void set(const std::vector<int>& idx, double value);
  std::size_t rank(std::vector<int> idx) const;
  std::vector<int> multiset(std::size_t rank) const;

  double frobenius_squared() const;
  DenseTensor dense() const;
  // Reads the sorted positions; the input is assumed symmetric.
  static SymmetricTensor from_dense(const DenseTensor& d);

  SymmetricTensor& operator+=(const SymmetricTensor& o);
  SymmetricTensor& operator*=(double s);

 private:
  int p_ = 0;
  int n_ = 0;
  std::vector<double> values_;
  std::shared_ptr<const MultisetIndex> index_;
};

SymmetricTensor operator+(SymmetricTensor a, const SymmetricTensor& b);
SymmetricTensor operator*(double s, SymmetricTensor a);

using Engine = std::mt19937_64;

// Seed derivation path (master, stream..., trial) hashed with splitmix64.
class SeededRng {
 public:
  explicit SeededRng(std::uint64_t master = 0) : master_(master) {}
  SeededRng stream(std::uint64_t id) const;
  Engine engine(std::uint64_t trial = 0) const;
  std::uint64_t master() const { return master_; }
  const std::vector<std::uint64_t>& path() const { return path_; }

 private:
  std::uint64_t master_;
  std::vector<std::uint64_t> path_;
};

// Entry i ~ N(0, sigma2 * prod_j c_j(i)!).
SymmetricTensor sample_wigner(int p, int n, double sigma2, Engine& rng);
// Haar orthogonal via QR of a Gaussian matrix with the sign fix on diag(R).
Eigen::MatrixXd sample_haar(int n, Engine& rng);
Eigen::MatrixXd sample_ginibre(int n, double sigma2, Engine& rng);
// (Q.T)_j = sum_i T_i prod_t Q_{i_t j_t}; any square matrix is allowed.
SymmetricTensor conjugate(const Eigen::MatrixXd& q, const SymmetricTensor& t);
SymmetricTensor rank_one(const Eigen::VectorXd& v, int p);
// Uniform on the sphere of squared radius radius2.
Eigen::VectorXd sample_sphere(int n, double radius2, Engine& rng);
// c on repeat-free positions, 0 elsewhere, with squared norm n^p.
SymmetricTensor wishart_like_A(int p, int n);
// Z.A with Z ~ Gin(n, 1/n).
SymmetricTensor wishart_like_sample(const SymmetricTensor& a, Engine& rng);

struct SpikedSample {
  Eigen::VectorXd v;
  SymmetricTensor y;
};
// Y = lambda v^{(x)p} + W with v uniform on the sphere of radius sqrt(n), W ~ Wig(p, n, 1).
SpikedSample spiked_sample(int p, int n, double lambda, Engine& rng);
// r^{-1/2} sum_{j<r} Z_j.A.
SymmetricTensor wishart_mixture_sample(const SymmetricTensor& a, int r, Engine& rng);

}  // namespace tcm
