#include "minsul/errors.hpp"

namespace minsul {

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::InvalidParameter: return "InvalidParameter";
    case ErrorCode::SingularPoint: return "SingularPoint";
    case ErrorCode::BracketFailure: return "BracketFailure";
    case ErrorCode::QuadratureFailure: return "QuadratureFailure";
    case ErrorCode::MeshMismatch: return "MeshMismatch";
    case ErrorCode::NewtonDivergence: return "NewtonDivergence";
    case ErrorCode::BarrierEscape: return "BarrierEscape";
    case ErrorCode::NoSolution: return "NoSolution";
    case ErrorCode::MonotonicityViolation: return "MonotonicityViolation";
    case ErrorCode::MaxIterations: return "MaxIterations";
    case ErrorCode::PremiseFailure: return "PremiseFailure";
    case ErrorCode::StepUnderflow: return "StepUnderflow";
    case ErrorCode::NoBracket: return "NoBracket";
    case ErrorCode::JacobianSingular: return "JacobianSingular";
    case ErrorCode::NoConvergence: return "NoConvergence";
    case ErrorCode::EventAbort: return "EventAbort";
    case ErrorCode::BoxViolation: return "BoxViolation";
    case ErrorCode::InadmissibleBox: return "InadmissibleBox";
    case ErrorCode::ConfigError: return "ConfigError";
    case ErrorCode::IoError: return "IoError";
  }
  return "Unknown";
}

int exit_status(ErrorCode code) {
  switch (code) {
    case ErrorCode::ConfigError: return 2;
    case ErrorCode::IoError: return 3;
    case ErrorCode::InvalidParameter: return 4;
    case ErrorCode::InadmissibleBox: return 5;
    case ErrorCode::SingularPoint: return 10;
    case ErrorCode::BracketFailure: return 11;
    case ErrorCode::QuadratureFailure: return 12;
    case ErrorCode::MeshMismatch: return 13;
    case ErrorCode::NewtonDivergence: return 14;
    case ErrorCode::BarrierEscape: return 15;
    case ErrorCode::NoSolution: return 16;
    case ErrorCode::MonotonicityViolation: return 17;
    case ErrorCode::MaxIterations: return 18;
    case ErrorCode::PremiseFailure: return 19;
    case ErrorCode::StepUnderflow: return 20;
    case ErrorCode::NoBracket: return 21;
    case ErrorCode::JacobianSingular: return 22;
    case ErrorCode::NoConvergence: return 23;
    case ErrorCode::EventAbort: return 24;
    case ErrorCode::BoxViolation: return 25;
  }
  return 1;
}

}  // namespace minsul
