#pragma once

#include <stdexcept>
#include <string>

namespace afdm {

/// Violated precondition on an operation argument (size mismatch, out-of-range value).
class PreconditionError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Invalid or inconsistent user configuration. Maps to CLI exit code 2.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Numerical failure at run time (factorization breakdown, exhausted budget).
class RuntimeError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// An exhaustive search would exceed its configured budget.
class BudgetExceeded : public RuntimeError {
 public:
  using RuntimeError::RuntimeError;
};

inline void require(bool condition, const std::string& message) {
  if (!condition) throw PreconditionError(message);
}

}  // namespace afdm
