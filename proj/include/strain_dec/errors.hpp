#pragma once

#include <stdexcept>
#include <string>
#include <utility>

#include <Eigen/Dense>

namespace strain_dec {

/// Base class of every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed argument (wrong shape, degree out of range, bad signature).
class ArgumentError : public Error {
 public:
  using Error::Error;
};

/// A documented precondition of an operation does not hold.
class PreconditionError : public Error {
 public:
  using Error::Error;
};

/// Metric too close to degenerate for a meaningful answer.
class ConditioningError : public Error {
 public:
  using Error::Error;
};

/// Invariant vector outside the domain of a Lagrangian.
class DomainError : public Error {
 public:
  DomainError(const std::string& what, Eigen::VectorXd offending)
      : Error(what), offending_(std::move(offending)) {}

  const Eigen::VectorXd& offending() const { return offending_; }

 private:
  Eigen::VectorXd offending_;
};

/// Finite-difference step could not keep the perturbed metric admissible.
class StepError : public Error {
 public:
  using Error::Error;
};

/// Invalid campaign / audit configuration.
class ConfigError : public Error {
 public:
  using Error::Error;
};

/// Malformed JSON input, with a location in the message.
class ParseError : public Error {
 public:
  using Error::Error;
};

/// File schema version differs from the one this build understands.
class SchemaVersionError : public ParseError {
 public:
  using ParseError::ParseError;
};

}  // namespace strain_dec
