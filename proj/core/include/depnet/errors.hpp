#pragma once

#include <stdexcept>
#include <string>

namespace depnet {

/// Base class for all library errors.
class Error : public std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Invalid argument or violated precondition.
class DomainError : public Error {
  using Error::Error;
};

/// Dense state-space cap exceeded.
class CapacityError : public Error {
  using Error::Error;
};

/// Corrupt or inconsistent model data: bad op log, invalid table, bad file.
class ModelError : public Error {
  using Error::Error;
};

/// Iterative solver failed to reach its tolerance.
class ConvergenceError : public Error {
 public:
  ConvergenceError(const std::string& what, double residual)
      : Error(what), residual_(residual) {}

  double residual() const noexcept { return residual_; }

 private:
  double residual_;
};

/// Chain is not ergodic (reducible or periodic) where ergodicity is required.
class DegeneracyError : public Error {
  using Error::Error;
};

}  // namespace depnet
