#pragma once

#include <stdexcept>
#include <string>

namespace qnet {

/// Broad failure category; the CLI maps these onto exit codes.
enum class ErrorKind {
  model,      // malformed input or violated model invariant
  numerical,  // singular transform, algebraic loop, diverged integration
};

/// Base of every library error. `error_class()` is the short machine-readable
/// tag printed by the CLI as `ERRCLASS: message`.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, std::string error_class, const std::string& message)
      : std::runtime_error(message), kind_(kind), class_(std::move(error_class)) {}

  ErrorKind kind() const noexcept { return kind_; }
  const std::string& error_class() const noexcept { return class_; }

 private:
  ErrorKind kind_;
  std::string class_;
};

class DimensionError : public Error {
 public:
  explicit DimensionError(const std::string& m) : Error(ErrorKind::model, "DimensionError", m) {}
};

class DimensionLimitError : public Error {
 public:
  explicit DimensionLimitError(const std::string& m)
      : Error(ErrorKind::model, "DimensionLimitError", m) {}
};

class InvariantError : public Error {
 public:
  explicit InvariantError(const std::string& m) : Error(ErrorKind::model, "InvariantError", m) {}
};

class ParseError : public Error {
 public:
  explicit ParseError(const std::string& m) : Error(ErrorKind::model, "ParseError", m) {}
};

class NetworkError : public Error {
 public:
  explicit NetworkError(const std::string& m) : Error(ErrorKind::model, "NetworkError", m) {}
};

class SingularTransformError : public Error {
 public:
  explicit SingularTransformError(const std::string& m)
      : Error(ErrorKind::numerical, "SingularTransformError", m) {}
};

class AlgebraicLoopError : public Error {
 public:
  explicit AlgebraicLoopError(const std::string& m)
      : Error(ErrorKind::numerical, "AlgebraicLoopError", m) {}
};

class PoleError : public Error {
 public:
  explicit PoleError(const std::string& m) : Error(ErrorKind::numerical, "PoleError", m) {}
};

class IntegrationDivergedError : public Error {
 public:
  IntegrationDivergedError(const std::string& m, double time)
      : Error(ErrorKind::numerical, "IntegrationDivergedError", m), time_(time) {}
  double time() const noexcept { return time_; }

 private:
  double time_;
};

class DomainExitError : public Error {
 public:
  explicit DomainExitError(const std::string& m)
      : Error(ErrorKind::numerical, "DomainExitError", m) {}
};

}  // namespace qnet
