#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

namespace qldpc {

// Caller bug: operands of incompatible shape.
class DimensionError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// Invalid parameters (handshake violation, probability out of range, ...).
class ParameterError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// A random construction could not satisfy its constraints within its retry budget.
class GenerationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// An exhaustive computation was refused because its cost exceeds the configured budget.
class BudgetExceeded : public std::runtime_error {
 public:
  BudgetExceeded(const std::string& what, double cost)
      : std::runtime_error(what + " (cost " + std::to_string(cost) + ")"), cost_(cost) {}
  double cost() const { return cost_; }

 private:
  double cost_;
};

// Input that cannot be a syndrome of the code (odd defect count, nonzero residual syndrome).
class InvalidSyndrome : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// Broken internal invariant; indicates a bug in this library.
class InternalError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

}  // namespace qldpc
