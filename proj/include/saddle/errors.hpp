#pragma once

#include <stdexcept>
#include <string>

namespace saddle {

/// Precondition or dimension-contract violation (caller bug).
class ContractViolation : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Non-finite values fed to an operation that requires finite input.
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// A coefficient sequence left its valid region (e.g. alpha*R >= 1).
class ScheduleDivergence : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// An iterate blew up or went non-finite; carries the offending step.
class DivergenceError : public std::runtime_error {
 public:
  DivergenceError(long step, const std::string& what)
      : std::runtime_error("divergence at k=" + std::to_string(step) + ": " + what),
        step_(step) {}
  long step() const { return step_; }

 private:
  long step_;
};

/// A numeric estimation procedure failed to converge.
class EstimationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Invalid run configuration; names the offending field.
class ConfigError : public std::runtime_error {
 public:
  ConfigError(const std::string& field, const std::string& what)
      : std::runtime_error("config field '" + field + "': " + what), field_(field) {}
  const std::string& field() const { return field_; }

 private:
  std::string field_;
};

}  // namespace saddle
