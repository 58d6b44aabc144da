// SPDX-License-Identifier: MIT
// Error types shared by the library and mapped to CLI exit codes.
#pragma once

#include <stdexcept>
#include <string>

namespace tcm {

// Malformed input: parity violations, size mismatches, bad file contents.
class InputError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// A configured resource guard was exceeded.
class CapacityError : public std::length_error {
 public:
  using std::length_error::length_error;
};

// Numeric failure such as a singular Gram system.
class NumericError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class RankDeficientError : public NumericError {
 public:
  using NumericError::NumericError;
};

inline void require(bool ok, const std::string& what) {
  if (!ok) throw InputError(what);
}

}  // namespace tcm
