#pragma once

#include <stdexcept>
#include <string>

namespace nhminor {

// Base of every failure that means "the numbers went bad", as opposed to bad input.
// Bad input is reported with std::invalid_argument.
class NumericalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class NoBranchRoot : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

class DegenerateLinearization : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

class SingularStability : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

class SingularNormalization : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

class QuadratureNotConverged : public NumericalError {
 public:
  QuadratureNotConverged(const std::string& what, double estimate, double error);
  double estimate() const { return estimate_; }
  double error() const { return error_; }

 private:
  double estimate_;
  double error_;
};

class EigenSolverFailure : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

class InsufficientReplicas : public NumericalError {
 public:
  InsufficientReplicas(std::size_t have, std::size_t need);
};

}  // namespace nhminor
