#pragma once

#include <stdexcept>
#include <string>

namespace atomgate {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class InvalidParameter : public Error {
 public:
  using Error::Error;
};

class DegenerateState : public Error {
 public:
  using Error::Error;
};

class IncompatibleGrid : public Error {
 public:
  using Error::Error;
};

class RangeError : public Error {
 public:
  using Error::Error;
};

class DomainError : public Error {
 public:
  using Error::Error;
};

class SingularKernel : public Error {
 public:
  using Error::Error;
};

/// Raised by iterative solvers; carries the best residual reached.
class ConvergenceError : public Error {
 public:
  ConvergenceError(const std::string& what, double residual)
      : Error(what), residual_(residual) {}
  double residual() const noexcept { return residual_; }

 private:
  double residual_;
};

/// Norm drift beyond the propagator's tolerance.
class InstabilityError : public Error {
 public:
  InstabilityError(const std::string& what, double drift)
      : Error(what), drift_(drift) {}
  double drift() const noexcept { return drift_; }

 private:
  double drift_;
};

class NotFound : public Error {
 public:
  NotFound(const std::string& what, double best)
      : Error(what), best_(best) {}
  /// Largest value observed during the search.
  double best() const noexcept { return best_; }

 private:
  double best_;
};

class ConfigError : public Error {
 public:
  using Error::Error;
};

}  // namespace atomgate
