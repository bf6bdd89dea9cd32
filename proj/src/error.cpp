#include "agebranch/error.hpp"

namespace agebranch {

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::InvalidArgument: return "InvalidArgument";
    case ErrorCode::InvalidSpec: return "InvalidSpec";
    case ErrorCode::EmptyOrZeroMass: return "EmptyOrZeroMass";
    case ErrorCode::HorizonNegative: return "HorizonNegative";
    case ErrorCode::TimeOutOfRange: return "TimeOutOfRange";
    case ErrorCode::InvalidGrid: return "InvalidGrid";
    case ErrorCode::NonConvergentStep: return "NonConvergentStep";
    case ErrorCode::Supercritical: return "Supercritical";
    case ErrorCode::NoMalthusianRoot: return "NoMalthusianRoot";
    case ErrorCode::MissingMomentCondition: return "MissingMomentCondition";
    case ErrorCode::GridTooShort: return "GridTooShort";
    case ErrorCode::Config: return "Config";
  }
  return "Unknown";
}

Error::Error(ErrorCode code, const std::string& message)
    : std::runtime_error(std::string(to_string(code)) + ": " + message),
      code_(code) {}

}  // namespace agebranch
