// SPDX-License-Identifier: MIT
#include "tcm/combinatorics.hpp"

#include <functional>

#include "tcm/error.hpp"

namespace tcm {

BigInt factorial(int k) {
  require(k >= 0, "factorial of a negative number");
  BigInt r = 1;
  for (int i = 2; i <= k; ++i) r *= i;
  return r;
}

BigInt double_factorial(int k) {
  require(k >= -1, "double factorial below -1");
  BigInt r = 1;
  for (int i = k; i > 1; i -= 2) r *= i;
  return r;
}

BigInt falling_factorial(long n, int k) {
  require(k >= 0, "falling factorial with negative length");
  if (n >= 0 && n < k) return 0;
  BigInt r = 1;
  for (int i = 0; i < k; ++i) r *= (n - i);
  return r;
}

BigInt double_falling(long m, int k) {
  require(k >= 0, "double falling factorial with negative length");
  BigInt r = 1;
  for (int i = 0; i < k; ++i) r *= (m - 2L * i);
  return r;
}

BigInt binomial(long n, int k) {
  if (k < 0 || n < k) return 0;
  return falling_factorial(n, k) / factorial(k);
}

double falling(double n, int k) {
  double r = 1.0;
  // For integer n < k the product passes through zero.
  for (int i = 0; i < k; ++i) r *= (n - i);
  return r;
}

double double_falling_d(double m, int k) {
  double r = 1.0;
  for (int i = 0; i < k; ++i) r *= (m - 2.0 * i);
  return r;
}

double factorial_d(int k) {
  double r = 1.0;
  for (int i = 2; i <= k; ++i) r *= i;
  return r;
}

std::uint64_t to_u64(const BigInt& v) {
  if (v < 0 || v > BigInt(UINT64_MAX)) throw CapacityError("integer does not fit in 64 bits");
  return v.convert_to<std::uint64_t>();
}

double to_double(const BigInt& v) { return v.convert_to<double>(); }
double to_double(const Rational& v) { return v.convert_to<double>(); }

std::vector<std::vector<int>> partitions(int k) {
  std::vector<std::vector<int>> out;
  std::vector<int> cur;
  std::function<void(int, int)> rec = [&](int rest, int max_part) {
    if (rest == 0) {
      out.push_back(cur);
      return;
    }
    for (int part = std::min(rest, max_part); part >= 1; --part) {
      cur.push_back(part);
      rec(rest - part, part);
      cur.pop_back();
    }
  };
  rec(k, k);
  return out;
}

}  // namespace tcm
