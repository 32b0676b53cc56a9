#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace minsul {

enum class ErrorCode {
  InvalidParameter,
  SingularPoint,
  BracketFailure,
  QuadratureFailure,
  MeshMismatch,
  NewtonDivergence,
  BarrierEscape,
  NoSolution,
  MonotonicityViolation,
  MaxIterations,
  PremiseFailure,
  StepUnderflow,
  NoBracket,
  JacobianSingular,
  NoConvergence,
  EventAbort,
  BoxViolation,
  InadmissibleBox,
  ConfigError,
  IoError,
};

std::string_view to_string(ErrorCode code);

/// Distinct process exit status per error code (used by the CLI).
int exit_status(ErrorCode code);

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(message), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

[[noreturn]] inline void fail(ErrorCode code, const std::string& message) {
  throw Error(code, message);
}

}  // namespace minsul
