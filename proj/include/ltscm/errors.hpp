#pragma once

#include <stdexcept>
#include <string>

namespace ltscm {

// A caller broke a documented precondition.
class ContractViolation : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

// Invalid configuration values (budgets, tiling specs, optimizer settings).
class ConfigError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// Malformed input text: snapshots, trajectory files, level files.
class ParseError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Broken internal invariant (never expected in correct code).
class InternalError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

// Objective or gradient became NaN/inf during optimization.
class NumericalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace ltscm
