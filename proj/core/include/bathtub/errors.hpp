#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace bathtub {

/// Machine-readable failure categories, mirrored by the CLI exit codes.
enum class ErrorCategory {
  configuration,         // bad meshes, bad flags, malformed inputs
  assumption_violation,  // a model precondition does not hold for the data
  non_convergence,       // an iterative solver exhausted its budget
  numerical,             // NaN / instability detected mid-solve
  io,                    // file system failures
};

const char* to_string(ErrorCategory category);

class Error : public std::runtime_error {
 public:
  Error(ErrorCategory category, const std::string& message)
      : std::runtime_error(message), category_(category) {}

  ErrorCategory category() const { return category_; }

 private:
  ErrorCategory category_;
};

class ConfigurationError : public Error {
 public:
  explicit ConfigurationError(const std::string& message)
      : Error(ErrorCategory::configuration, message) {}
};

class AssumptionViolation : public Error {
 public:
  explicit AssumptionViolation(const std::string& message)
      : Error(ErrorCategory::assumption_violation, message) {}
};

class NumericalError : public Error {
 public:
  explicit NumericalError(const std::string& message)
      : Error(ErrorCategory::numerical, message) {}
};

class IoError : public Error {
 public:
  explicit IoError(const std::string& message) : Error(ErrorCategory::io, message) {}
};

/// Raised when an iterative solver hits its iteration budget. Carries the
/// full per-iteration sup-norm update history so callers can audit the
/// divergence pattern.
class NonConvergenceError : public Error {
 public:
  NonConvergenceError(const std::string& message, std::vector<double> update_norms)
      : Error(ErrorCategory::non_convergence, message),
        update_norms_(std::move(update_norms)) {}

  const std::vector<double>& update_norms() const { return update_norms_; }

 private:
  std::vector<double> update_norms_;
};

/// Config-text parse failure with source location.
class ParseError : public ConfigurationError {
 public:
  ParseError(const std::string& message, int line, int column)
      : ConfigurationError(message + " (line " + std::to_string(line) + ", column " +
                           std::to_string(column) + ")"),
        line_(line),
        column_(column) {}

  int line() const { return line_; }
  int column() const { return column_; }

 private:
  int line_;
  int column_;
};

}  // namespace bathtub
