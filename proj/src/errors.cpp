#include "tidg/errors.hpp"

namespace tidg {

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::DegenerateDenominator: return "DegenerateDenominator";
    case ErrorCode::SingularMatrix: return "SingularMatrix";
    case ErrorCode::InvalidDimensions: return "InvalidDimensions";
    case ErrorCode::UncoveredBoundaryEdge: return "UncoveredBoundaryEdge";
    case ErrorCode::PointOutsideElement: return "PointOutsideElement";
    case ErrorCode::UnsupportedDegree: return "UnsupportedDegree";
    case ErrorCode::MissingBoundaryData: return "MissingBoundaryData";
    case ErrorCode::InvalidStabilization: return "InvalidStabilization";
    case ErrorCode::NonPositive: return "NonPositive";
    case ErrorCode::SingularSystem: return "SingularSystem";
    case ErrorCode::ToleranceNotReached: return "ToleranceNotReached";
    case ErrorCode::ZeroReference: return "ZeroReference";
    case ErrorCode::InvalidSequence: return "InvalidSequence";
    case ErrorCode::NonConstantFiber: return "NonConstantFiber";
    case ErrorCode::ConfigError: return "ConfigError";
    case ErrorCode::StabilityViolation: return "StabilityViolation";
  }
  return "Unknown";
}

Error::Error(ErrorCode code, const std::string& message)
    : std::runtime_error(std::string(to_string(code)) + ": " + message), code_(code) {}

}  // namespace tidg
