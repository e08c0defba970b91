#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <string_view>

namespace curvflow {

enum class ErrorKind {
  InvalidArgument,
  RetryLimitExceeded,
  InfeasibleThreshold,
  UnsupportedInput,
  UncorrectableRow,
  PsdViolation,
  NotMarkovian,
  UndefinedForIsolated,
  Divergence,
  NormToleranceExceeded,
  NotAnEquilibrium,
  FlowStopped,
  Io,
  Parse,
};

/// Stable machine-readable name, used in CLI error JSON.
std::string_view to_string(ErrorKind kind) noexcept;

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& message)
      : std::runtime_error(message), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

/// Raised when an integration stage produces non-finite rates.
class DivergenceError : public Error {
 public:
  DivergenceError(double time, std::size_t step);

  double time() const noexcept { return time_; }
  std::size_t step() const noexcept { return step_; }

 private:
  double time_;
  std::size_t step_;
};

[[noreturn]] void fail(ErrorKind kind, const std::string& message);

}  // namespace curvflow
