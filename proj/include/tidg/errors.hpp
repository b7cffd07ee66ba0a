#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace tidg {

enum class ErrorCode {
  DegenerateDenominator,
  SingularMatrix,
  InvalidDimensions,
  UncoveredBoundaryEdge,
  PointOutsideElement,
  UnsupportedDegree,
  MissingBoundaryData,
  InvalidStabilization,
  NonPositive,
  SingularSystem,
  ToleranceNotReached,
  ZeroReference,
  InvalidSequence,
  NonConstantFiber,
  ConfigError,
  StabilityViolation,
};

std::string_view to_string(ErrorCode code);

/// Every failure raised by the library carries one of the codes above so the
/// CLI can map it to an exit status and a machine-readable record.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message);

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace tidg
