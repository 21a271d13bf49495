#pragma once

#include <stdexcept>
#include <string>

namespace mtlab {

/// Base of every error raised by the library. `kind()` is a stable
/// snake_case identifier used in machine-readable diagnostics.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
  virtual const char* kind() const noexcept { return "error"; }
};

/// An input lies outside the mathematical domain of an operation.
class DomainError : public Error {
 public:
  using Error::Error;
  const char* kind() const noexcept override { return "domain_error"; }
};

/// A parameter bundle fails its declared invariants.
class InvariantViolation : public DomainError {
 public:
  using DomainError::DomainError;
  const char* kind() const noexcept override { return "invariant_violation"; }
};

/// The forcing is at or beyond the point where two cubic roots merge.
class DegenerateRoots : public DomainError {
 public:
  using DomainError::DomainError;
  const char* kind() const noexcept override { return "degenerate_roots"; }
};

class SingularVelocity : public DomainError {
 public:
  using DomainError::DomainError;
  const char* kind() const noexcept override { return "singular_velocity"; }
};

class NoRoot : public DomainError {
 public:
  using DomainError::DomainError;
  const char* kind() const noexcept override { return "no_root"; }
};

/// Time step exceeds the scheme's stability bound.
class StabilityViolation : public DomainError {
 public:
  using DomainError::DomainError;
  const char* kind() const noexcept override { return "stability_violation"; }
};

/// Failure detected while a computation was running.
class RuntimeFailure : public Error {
 public:
  using Error::Error;
  const char* kind() const noexcept override { return "runtime_failure"; }
};

class Blowup : public RuntimeFailure {
 public:
  Blowup(const std::string& what, double where)
      : RuntimeFailure(what), where_(where) {}
  const char* kind() const noexcept override { return "blowup"; }
  /// Independent variable (xi or tau) at which the bound was exceeded.
  double where() const noexcept { return where_; }

 private:
  double where_;
};

class NoFront : public RuntimeFailure {
 public:
  using RuntimeFailure::RuntimeFailure;
  const char* kind() const noexcept override { return "no_front"; }
};

class NegativeDensity : public RuntimeFailure {
 public:
  using RuntimeFailure::RuntimeFailure;
  const char* kind() const noexcept override { return "negative_density"; }
};

/// Malformed or inconsistent configuration file. `line()` is 0 when the
/// problem is not tied to a specific line (missing file, missing key).
class ConfigError : public Error {
 public:
  ConfigError(const std::string& source, int line, const std::string& message)
      : Error(format(source, line, message)), source_(source), line_(line) {}
  const char* kind() const noexcept override { return "config_error"; }
  const std::string& source() const noexcept { return source_; }
  int line() const noexcept { return line_; }

 private:
  static std::string format(const std::string& source, int line,
                            const std::string& message) {
    if (line > 0) return source + ":" + std::to_string(line) + ": " + message;
    return source + ": " + message;
  }
  std::string source_;
  int line_;
};

/// Bad command-line usage.
class UsageError : public Error {
 public:
  using Error::Error;
  const char* kind() const noexcept override { return "usage_error"; }
};

}  // namespace mtlab
