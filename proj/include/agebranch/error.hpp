#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace agebranch {

enum class ErrorCode {
  InvalidArgument,
  InvalidSpec,
  EmptyOrZeroMass,
  HorizonNegative,
  TimeOutOfRange,
  InvalidGrid,
  NonConvergentStep,
  Supercritical,
  NoMalthusianRoot,
  MissingMomentCondition,
  GridTooShort,
  Config,
};

std::string_view to_string(ErrorCode code);

// Single exception type for the library; callers switch on code().
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message);

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace agebranch
