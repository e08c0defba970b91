#include "curvflow/errors.hpp"

#include <sstream>

namespace curvflow {

std::string_view to_string(ErrorKind kind) noexcept {
  switch (kind) {
    case ErrorKind::InvalidArgument: return "invalid-argument";
    case ErrorKind::RetryLimitExceeded: return "retry-limit-exceeded";
    case ErrorKind::InfeasibleThreshold: return "infeasible-threshold";
    case ErrorKind::UnsupportedInput: return "unsupported-input";
    case ErrorKind::UncorrectableRow: return "uncorrectable-row";
    case ErrorKind::PsdViolation: return "psd-violation";
    case ErrorKind::NotMarkovian: return "not-markovian";
    case ErrorKind::UndefinedForIsolated: return "undefined-for-isolated";
    case ErrorKind::Divergence: return "divergence";
    case ErrorKind::NormToleranceExceeded: return "norm-tolerance-exceeded";
    case ErrorKind::NotAnEquilibrium: return "not-an-equilibrium";
    case ErrorKind::FlowStopped: return "flow-stopped";
    case ErrorKind::Io: return "io";
    case ErrorKind::Parse: return "parse";
  }
  return "unknown";
}

namespace {
std::string divergence_message(double time, std::size_t step) {
  std::ostringstream os;
  os << "flow diverged (non-finite rates) at t = " << time << " (step " << step << ")";
  return os.str();
}
}  // namespace

DivergenceError::DivergenceError(double time, std::size_t step)
    : Error(ErrorKind::Divergence, divergence_message(time, step)), time_(time), step_(step) {}

void fail(ErrorKind kind, const std::string& message) { throw Error(kind, message); }

}  // namespace curvflow
