#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

namespace wazkit {

/// Base class for all library errors.
struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// A specification is malformed (unbound symbol, mismatched declarations,
/// inconsistent dimensions at build time).
struct SpecError : Error {
  using Error::Error;
};

/// A well-formed operation was called with invalid arguments.
struct ArgumentError : Error {
  using Error::Error;
};

/// Expression text could not be parsed. `offset` is the 0-based position in
/// the source string where the problem was detected.
struct ParseError : Error {
  ParseError(const std::string& what, std::size_t offset_)
      : Error(what + " (at offset " + std::to_string(offset_) + ")"),
        offset(offset_) {}
  std::size_t offset;
};

/// An expression hit a numeric domain error (division by zero, log of a
/// non-positive value, ...). `offset` points at the offending node's source
/// position.
struct EvalError : Error {
  EvalError(const std::string& what, std::size_t offset_)
      : Error(what + " (at offset " + std::to_string(offset_) + ")"),
        offset(offset_) {}
  std::size_t offset;
};

/// The integrator could not continue (step-size underflow, non-finite state).
struct IntegrationError : Error {
  enum class Kind { StepUnderflow, Divergence, StepLimit };

  IntegrationError(Kind kind_, const std::string& what,
                   std::vector<double> last_state_, double t_)
      : Error(what), kind(kind_), last_state(std::move(last_state_)), t(t_) {}

  Kind kind;
  std::vector<double> last_state;
  double t;
};

/// A bisection precondition failed: the named curve endpoint did not classify
/// as required.
struct BracketError : Error {
  BracketError(const std::string& what, std::string endpoint_)
      : Error(what), endpoint(std::move(endpoint_)) {}
  std::string endpoint;
};

/// A search exhausted its budget without finding the requested object.
struct NotFoundError : Error {
  using Error::Error;
};

}  // namespace wazkit
