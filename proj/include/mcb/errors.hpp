#pragma once

#include <stdexcept>
#include <string>

namespace mcb {

/// Bad argument to a pure function (out-of-range index, N > K, ...).
class InvalidInput : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Scenario or config that cannot be run.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A caller broke a policy's calling protocol (e.g. act() twice without observe()).
class ContractViolation : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

/// The engine detected a broken runtime invariant. The CLI maps this to exit code 3.
class InvariantBreach : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace mcb
