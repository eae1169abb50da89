#pragma once

#include <stdexcept>
#include <string>

namespace cinemagraph {

/// Malformed or inconsistent input data (missing frames, size mismatches,
/// empty regions). Maps to CLI exit code 2.
class DataError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A numerical routine could not produce a valid result (non-finite input,
/// rank-deficient system). Maps to CLI exit code 3.
class NumericalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Invalid parameters or configuration. Maps to CLI exit code 1.
class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace cinemagraph
