#pragma once

#include <stdexcept>
#include <string>

namespace mcpg {

// All library errors derive from std::runtime_error or std::invalid_argument
// so callers that only care about "something failed" can catch the std types.

/// Non-finite input, bad period, master used where a client is required, ...
class InvalidArgument : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// A value outside the set the caller's layer accepts (e.g. a gait period).
class ValidationError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Periods 2, 3 and 7 do not produce a walking gait.
class UnsupportedPeriod : public ValidationError {
 public:
  explicit UnsupportedPeriod(int period);
  int period() const noexcept { return period_; }

 private:
  int period_;
};

/// The controller was asked for a control input before p steps of history.
class NotReady : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Every candidate the proposal rule can reach has already been evaluated.
class Exhausted : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Newton refinement could not locate a periodic orbit of the requested period.
class OrbitNotFound : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace mcpg
