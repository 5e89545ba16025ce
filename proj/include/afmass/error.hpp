#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace afmass {

/// Failure categories shared by every module. The CLI maps them to exit codes.
enum class ErrorKind {
  SingularPoint,
  NotPositiveDefinite,
  StepTooLarge,
  NonPositiveConformalFactor,
  PoleEvaluation,
  DegenerateNormal,
  FitIllConditioned,
  ZeroRhoMin,
  TailNotNegligible,
  GridTooCoarse,
  NonPositiveU,
  WindowExitsChart,
  GridMismatch,
  MissingCap,
  EstimatesDisagree,
  ConfigInvalid,
  IoError,
  ComputationFailed,
};

std::string_view to_string(ErrorKind kind);

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(std::string(to_string(kind)) + ": " + what),
        kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

}  // namespace afmass
