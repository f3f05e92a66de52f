#pragma once

#include <stdexcept>
#include <string>

namespace discgs {

/// Precondition or argument violation (bad dimensions, empty input, W > n, ...).
class InvalidArgument : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// File could not be read or written, or its content is malformed.
class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A scale matrix that should be positive-definite failed its Cholesky
/// factorization. Carries an estimate of the offending minimum eigenvalue.
class NumericalDegeneracy : public std::runtime_error {
 public:
  NumericalDegeneracy(const std::string& what, double min_eigenvalue)
      : std::runtime_error(what), min_eigenvalue_(min_eigenvalue) {}

  double min_eigenvalue() const noexcept { return min_eigenvalue_; }

  /// Same error with `context` prepended to the message.
  NumericalDegeneracy with_context(const std::string& context) const {
    return NumericalDegeneracy(context + ": " + what(), min_eigenvalue_);
  }

 private:
  double min_eigenvalue_;
};

}  // namespace discgs
