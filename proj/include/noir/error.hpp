#pragma once

#include <stdexcept>
#include <string>

namespace noir {

enum class ErrorCode {
  // graph construction / generation
  IndexOutOfRange,
  SelfLoop,
  DuplicateEdge,
  EdgeFromOutlet,
  EdgeToInlet,
  InfeasibleParams,
  // actions and tendency matrices
  MissingProbability,
  NormalizationViolated,
  UnknownEdge,
  UnknownAction,
  NoConvergence,
  // dynamics and constraint compilation
  DimensionMismatch,
  InvalidState,
  InfeasibleBox,
  // learning window
  NonContiguousStep,
  EmptyWindow,
  // qp
  IllConditioned,
  // mpc
  QpInfeasibleNoFallback,
  // scenario / config parsing
  InvalidScenario,
};

const char* to_string(ErrorCode code);

/// Single exception type for contract violations; the code tells tests and
/// the CLI which contract failed.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

[[noreturn]] inline void fail(ErrorCode code, const std::string& what) { throw Error(code, what); }

}  // namespace noir
