// SPDX-License-Identifier: MIT
// Integer helpers: factorials, falling products, binomials, partitions.
#pragma once

#include <boost/multiprecision/cpp_int.hpp>
#include <cstdint>
#include <vector>

namespace tcm {

using BigInt = boost::multiprecision::cpp_int;
using Rational = boost::multiprecision::cpp_rational;

// k! as an exact integer.
BigInt factorial(int k);
// k!! = k (k-2) (k-4) ... down to 1 or 2; (-1)!! = 0!! = 1.
BigInt double_factorial(int k);
// n (n-1) ... (n-k+1); zero when 0 <= n < k.
BigInt falling_factorial(long n, int k);
// m (m-2) ... (m-2k+2).
BigInt double_falling(long m, int k);
BigInt binomial(long n, int k);

// Floating versions for large n.
double falling(double n, int k);
double double_falling_d(double m, int k);
double factorial_d(int k);

std::uint64_t to_u64(const BigInt& v);
double to_double(const BigInt& v);
double to_double(const Rational& v);

// Integer partitions of k in non-increasing part order, lexicographically decreasing.
std::vector<std::vector<int>> partitions(int k);

}  // namespace tcm
