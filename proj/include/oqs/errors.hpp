#pragma once

#include <stdexcept>
#include <string>

namespace oqs {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Shapes, dimensions or symmetries that make an input unusable.
class StructuralError : public Error {
 public:
  using Error::Error;
};

/// A numerical routine failed (non-convergence, ill-conditioned solve).
class NumericError : public Error {
 public:
  NumericError(const std::string& what, double condition = 0.0)
      : Error(what), condition_(condition) {}
  double condition() const noexcept { return condition_; }

 private:
  double condition_;
};

/// A real energy sits on (or within round-off of) a level of the closed system.
class SingularityError : public NumericError {
 public:
  using NumericError::NumericError;
};

/// An identity that must hold exactly (trace rule, positivity) was violated.
class ConsistencyError : public Error {
 public:
  using Error::Error;
};

/// A closed-form approximation was requested outside its regime of validity.
class RegimeError : public Error {
 public:
  using Error::Error;
};

/// A statistical fit could not be performed on the given sample.
class FitError : public Error {
 public:
  using Error::Error;
};

/// An invalid configuration file or option; `line` is 0 when unknown.
class ConfigError : public Error {
 public:
  ConfigError(const std::string& what, int line = 0)
      : Error(line > 0 ? "line " + std::to_string(line) + ": " + what : what), line_(line) {}
  int line() const noexcept { return line_; }

 private:
  int line_;
};

}  // namespace oqs
