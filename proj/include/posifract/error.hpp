#pragma once

#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace posifract {

enum class ErrorKind {
  dimension,
  parameter,
  domain,
  configuration,
  validation,
  positivity,
  not_contractive,
  non_convergence,
};

const char* to_string(ErrorKind kind) noexcept;

/// Base of every error raised by the library. `kind()` lets front ends map
/// failures onto exit codes without a dynamic_cast ladder.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(what), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

/// Operands live on different grids, have different lengths, or counts disagree.
class DimensionError : public Error {
 public:
  explicit DimensionError(const std::string& what) : Error(ErrorKind::dimension, what) {}
};

/// A scalar argument is outside its admissible range (negative scalar, p < 1, ...).
class ParameterError : public Error {
 public:
  explicit ParameterError(const std::string& what) : Error(ErrorKind::parameter, what) {}
};

/// An argument lies outside the set an operation is defined on.
class DomainError : public Error {
 public:
  explicit DomainError(const std::string& what) : Error(ErrorKind::domain, what) {}
};

class ConfigurationError : public Error {
 public:
  explicit ConfigurationError(const std::string& what)
      : Error(ErrorKind::configuration, what) {}
};

class ValidationError : public Error {
 public:
  explicit ValidationError(const std::string& what) : Error(ErrorKind::validation, what) {}
};

/// An operator produced a negative sample, i.e. left the semi-space.
class PositivityError : public Error {
 public:
  PositivityError(const std::string& what, double x, double value)
      : Error(ErrorKind::positivity, what), x_(x), value_(value) {}

  double x() const noexcept { return x_; }
  double value() const noexcept { return value_; }

 private:
  double x_;
  double value_;
};

class NotContractiveError : public Error {
 public:
  NotContractiveError(const std::string& what, double factor)
      : Error(ErrorKind::not_contractive, what), factor_(factor) {}

  double factor() const noexcept { return factor_; }

 private:
  double factor_;
};

/// Raised when an iteration exhausts its budget; carries the distance history.
class NonConvergenceError : public Error {
 public:
  NonConvergenceError(const std::string& what, std::vector<double> history)
      : Error(ErrorKind::non_convergence, what), history_(std::move(history)) {}

  const std::vector<double>& history() const noexcept { return history_; }

 private:
  std::vector<double> history_;
};

}  // namespace posifract
