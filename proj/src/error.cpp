#include "afmass/error.hpp"

namespace afmass {

std::string_view to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::SingularPoint: return "SingularPoint";
    case ErrorKind::NotPositiveDefinite: return "NotPositiveDefinite";
    case ErrorKind::StepTooLarge: return "StepTooLarge";
    case ErrorKind::NonPositiveConformalFactor: return "NonPositiveConformalFactor";
    case ErrorKind::PoleEvaluation: return "PoleEvaluation";
    case ErrorKind::DegenerateNormal: return "DegenerateNormal";
    case ErrorKind::FitIllConditioned: return "FitIllConditioned";
    case ErrorKind::ZeroRhoMin: return "ZeroRhoMin";
    case ErrorKind::TailNotNegligible: return "TailNotNegligible";
    case ErrorKind::GridTooCoarse: return "GridTooCoarse";
    case ErrorKind::NonPositiveU: return "NonPositiveU";
    case ErrorKind::WindowExitsChart: return "WindowExitsChart";
    case ErrorKind::GridMismatch: return "GridMismatch";
    case ErrorKind::MissingCap: return "MissingCap";
    case ErrorKind::EstimatesDisagree: return "EstimatesDisagree";
    case ErrorKind::ConfigInvalid: return "ConfigInvalid";
    case ErrorKind::IoError: return "IoError";
    case ErrorKind::ComputationFailed: return "ComputationFailed";
  }
  return "Unknown";
}

}  // namespace afmass
