#pragma once

#include <stdexcept>
#include <string>

namespace warpsol {

/// Base class for failures of a numerical method (as opposed to bad input).
/// The CLI maps these to exit code 2.
class NumericalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class ConvergenceError : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

/// Raised when a linear operator has an eigenvalue inside the singular band.
class SingularOperatorError : public NumericalError {
 public:
  SingularOperatorError(const std::string& what, double eigenvalue)
      : NumericalError(what), eigenvalue_(eigenvalue) {}
  double eigenvalue() const { return eigenvalue_; }

 private:
  double eigenvalue_;
};

}  // namespace warpsol
