// SPDX-License-Identifier: MIT
#include "tcm/tensor.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <mutex>

#include "tcm/combinatorics.hpp"
#include "tcm/error.hpp"

namespace tcm {

namespace {

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

std::size_t ipow(int n, int p) {
  std::size_t r = 1;
  for (int k = 0; k < p; ++k) r *= static_cast<std::size_t>(n);
  return r;
}

std::shared_ptr<const MultisetIndex> build_index(int p, int n) {
  auto idx = std::make_shared<MultisetIndex>();
  idx->p = p;
  idx->n = n;
  const double dense_size = std::pow(static_cast<double>(n), p);
  if (dense_size > 6.0e7) throw CapacityError("dense tensor n^p exceeds 6e7 entries");
  const std::size_t count = n == 0 ? 0 : to_u64(binomial(n + p - 1, p));
  idx->multisets.assign(count * p, 0);
  idx->orbit.assign(count, 0.0);
  idx->repeat_product.assign(count, 0.0);
  idx->dense_to_rank.assign(ipow(n, p), 0);
  if (count == 0) return idx;
  const double pfact = factorial_d(p);
  // Binomial table for colex ranks.
  std::vector<std::vector<std::uint64_t>> binom(n + p + 1, std::vector<std::uint64_t>(p + 2, 0));
  for (int a = 0; a <= n + p; ++a) {
    binom[a][0] = 1;
    for (int b = 1; b <= std::min(a, p + 1); ++b) binom[a][b] = binom[a - 1][b - 1] + (b <= a - 1 ? binom[a - 1][b] : 0);
  }
  auto rank_sorted = [&](const std::vector<int>& s) {
    std::uint64_t r = 0;
    for (int k = 0; k < p; ++k) r += binom[s[k] + k][k + 1];
    return r;
  };
  std::vector<int> tuple(p, 0);
  for (std::size_t flat = 0; flat < idx->dense_to_rank.size(); ++flat) {
    std::vector<int> sorted = tuple;
    std::sort(sorted.begin(), sorted.end());
    const std::uint64_t r = rank_sorted(sorted);
    idx->dense_to_rank[flat] = static_cast<std::uint32_t>(r);
    if (std::is_sorted(tuple.begin(), tuple.end())) {
      std::copy(sorted.begin(), sorted.end(), idx->multisets.begin() + static_cast<long>(r * p));
      double rep = 1.0;
      for (int k = 0; k < p;) {
        int j = k;
        while (j < p && sorted[j] == sorted[k]) ++j;
        rep *= factorial_d(j - k);
        k = j;
      }
      idx->repeat_product[r] = rep;
      idx->orbit[r] = pfact / rep;
    }
    for (int k = p - 1; k >= 0; --k) {
      if (++tuple[k] < n) break;
      tuple[k] = 0;
    }
  }
  return idx;
}

}  // namespace

std::shared_ptr<const MultisetIndex> multiset_index(int p, int n) {
  require(p >= 1 && n >= 0, "tensor needs p >= 1 and n >= 0");
  static std::mutex mu;
  static std::map<std::pair<int, int>, std::shared_ptr<const MultisetIndex>> cache;
  std::lock_guard<std::mutex> lock(mu);
  auto& slot = cache[{p, n}];
  if (!slot) slot = build_index(p, n);
  return slot;
}

SymmetricTensor::SymmetricTensor(int p, int n) : p_(p), n_(n), index_(multiset_index(p, n)) {
  values_.assign(index_->size(), 0.0);
}

std::size_t SymmetricTensor::rank(std::vector<int> idx) const {
  require(static_cast<int>(idx.size()) == p_, "index length differs from tensor arity");
  std::size_t flat = 0;
  for (int i : idx) {
    require(i >= 0 && i < n_, "tensor index out of range");
    flat = flat * n_ + i;
  }
  return index_->dense_to_rank[flat];
}

double SymmetricTensor::at(const std::vector<int>& idx) const { return values_[rank(idx)]; }

void SymmetricTensor::set(const std::vector<int>& idx, double value) { values_[rank(idx)] = value; }

std::vector<int> SymmetricTensor::multiset(std::size_t r) const {
  auto first = index_->multisets.begin() + static_cast<long>(r * p_);
  return std::vector<int>(first, first + p_);
}

double SymmetricTensor::frobenius_squared() const {
  double s = 0.0;
  for (std::size_t r = 0; r < values_.size(); ++r) s += index_->orbit[r] * values_[r] * values_[r];
  return s;
}

DenseTensor SymmetricTensor::dense() const {
  DenseTensor d{p_, n_, std::vector<double>(index_->dense_to_rank.size())};
  for (std::size_t f = 0; f < d.data.size(); ++f) d.data[f] = values_[index_->dense_to_rank[f]];
  return d;
}

SymmetricTensor SymmetricTensor::from_dense(const DenseTensor& d) {
  SymmetricTensor t(d.p, d.n);
  require(d.data.size() == t.index_->dense_to_rank.size(), "dense tensor has the wrong size");
  for (std::size_t r = 0; r < t.size(); ++r) {
    std::size_t flat = 0;
    for (int k = 0; k < d.p; ++k) flat = flat * d.n + t.index_->multisets[r * d.p + k];
    t.values_[r] = d.data[flat];
  }
  return t;
}

SymmetricTensor& SymmetricTensor::operator+=(const SymmetricTensor& o) {
  require(o.p_ == p_ && o.n_ == n_, "tensor shapes differ");
  for (std::size_t r = 0; r < values_.size(); ++r) values_[r] += o.values_[r];
  return *this;
}

SymmetricTensor& SymmetricTensor::operator*=(double s) {
  for (auto& x : values_) x *= s;
  return *this;
}

SymmetricTensor operator+(SymmetricTensor a, const SymmetricTensor& b) { return a += b; }
SymmetricTensor operator*(double s, SymmetricTensor a) { return a *= s; }

SeededRng SeededRng::stream(std::uint64_t id) const {
  SeededRng out = *this;
  out.path_.push_back(id);
  return out;
}

Engine SeededRng::engine(std::uint64_t trial) const {
  std::uint64_t state = splitmix64(master_);
  for (std::uint64_t id : path_) state = splitmix64(state ^ splitmix64(id + 0x632be59bd9b4e019ULL));
  state = splitmix64(state ^ splitmix64(trial + 0x85157af5ULL));
  return Engine(state);
}

SymmetricTensor sample_wigner(int p, int n, double sigma2, Engine& rng) {
  require(sigma2 > 0, "Wigner variance must be positive");
  SymmetricTensor t(p, n);
  std::normal_distribution<double> normal(0.0, 1.0);
  const auto& rep = t.index().repeat_product;
  for (std::size_t r = 0; r < t.size(); ++r) t.values()[r] = std::sqrt(sigma2 * rep[r]) * normal(rng);
  return t;
}

Eigen::MatrixXd sample_ginibre(int n, double sigma2, Engine& rng) {
  require(n >= 0 && sigma2 > 0, "invalid Ginibre parameters");
  std::normal_distribution<double> normal(0.0, std::sqrt(sigma2));
  Eigen::MatrixXd z(n, n);
  for (int j = 0; j < n; ++j)
    for (int i = 0; i < n; ++i) z(i, j) = normal(rng);
  return z;
}

Eigen::MatrixXd sample_haar(int n, Engine& rng) {
  require(n >= 1, "Haar sampling needs n >= 1");
  const Eigen::MatrixXd g = sample_ginibre(n, 1.0, rng);
  Eigen::HouseholderQR<Eigen::MatrixXd> qr(g);
  Eigen::MatrixXd q = qr.householderQ();
  const auto& r = qr.matrixQR();
  for (int k = 0; k < n; ++k)
    if (r(k, k) < 0) q.col(k) *= -1.0;
  return q;
}

SymmetricTensor conjugate(const Eigen::MatrixXd& q, const SymmetricTensor& t) {
  const int n = t.n();
  require(q.rows() == n && q.cols() == n, "matrix and tensor dimensions differ");
  DenseTensor d = t.dense();
  const auto rest = static_cast<Eigen::Index>(d.data.size() / std::max(n, 1));
  // Transform the leading mode and rotate it to the back, p times.
  for (int mode = 0; mode < t.p(); ++mode) {
    Eigen::Map<const Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>> m(d.data.data(), n, rest);
    Eigen::MatrixXd r = q.transpose() * m;
    std::copy(r.data(), r.data() + r.size(), d.data.begin());
  }
  return SymmetricTensor::from_dense(d);
}

SymmetricTensor rank_one(const Eigen::VectorXd& v, int p) {
  SymmetricTensor t(p, static_cast<int>(v.size()));
  for (std::size_t r = 0; r < t.size(); ++r) {
    double prod = 1.0;
    for (int k = 0; k < p; ++k) prod *= v[t.index().multisets[r * p + k]];
    t.values()[r] = prod;
  }
  return t;
}

Eigen::VectorXd sample_sphere(int n, double radius2, Engine& rng) {
  require(n >= 1 && radius2 > 0, "invalid sphere parameters");
  std::normal_distribution<double> normal(0.0, 1.0);
  Eigen::VectorXd g(n);
  do {
    for (int i = 0; i < n; ++i) g[i] = normal(rng);
  } while (g.norm() == 0.0);
  return g * (std::sqrt(radius2) / g.norm());
}

SymmetricTensor wishart_like_A(int p, int n) {
  if (n < p) throw InputError("wishart_like_A needs n >= p (no repeat-free positions otherwise)");
  SymmetricTensor a(p, n);
  const double c = std::pow(static_cast<double>(n), 0.5 * p) / std::sqrt(falling(n, p));
  for (std::size_t r = 0; r < a.size(); ++r)
    if (a.index().repeat_product[r] == 1.0) a.values()[r] = c;
  return a;
}

SymmetricTensor wishart_like_sample(const SymmetricTensor& a, Engine& rng) {
  return conjugate(sample_ginibre(a.n(), 1.0 / a.n(), rng), a);
}

SpikedSample spiked_sample(int p, int n, double lambda, Engine& rng) {
  require(lambda >= 0, "spike strength must be non-negative");
  SpikedSample s;
  s.v = sample_sphere(n, n, rng);
  s.y = sample_wigner(p, n, 1.0, rng);
  if (lambda != 0.0) s.y += lambda * rank_one(s.v, p);
  return s;
}

SymmetricTensor wishart_mixture_sample(const SymmetricTensor& a, int r, Engine& rng) {
  require(r >= 1, "bin count must be positive");
  SymmetricTensor y(a.p(), a.n());
  for (int j = 0; j < r; ++j) y += wishart_like_sample(a, rng);
  y *= 1.0 / std::sqrt(static_cast<double>(r));
  return y;
}

}  // namespace tcm
