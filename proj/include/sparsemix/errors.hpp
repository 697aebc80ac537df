#pragma once

#include <stdexcept>
#include <string>

namespace sparsemix {

enum class ErrorCode {
  InvalidArgument,
  NotSpd,
  DegreesOfFreedomTooSmall,
  NonPositiveParameter,
  InvalidParameters,
  AllWeightsDegenerate,
  ZeroRangeColumn,
  InvalidState,
  NoRetainedIterations,
  DegenerateCluster,
  NoIdentifiedDraws,
  MatchingCardinalityMismatch,
  NotNormalGammaRun,
  ParseError,
  UnknownDataset,
  UnknownDesign,
  ChecksumMismatch,
  Io,
};

inline const char* to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::InvalidArgument: return "InvalidArgument";
    case ErrorCode::NotSpd: return "NotSpd";
    case ErrorCode::DegreesOfFreedomTooSmall: return "DegreesOfFreedomTooSmall";
    case ErrorCode::NonPositiveParameter: return "NonPositiveParameter";
    case ErrorCode::InvalidParameters: return "InvalidParameters";
    case ErrorCode::AllWeightsDegenerate: return "AllWeightsDegenerate";
    case ErrorCode::ZeroRangeColumn: return "ZeroRangeColumn";
    case ErrorCode::InvalidState: return "InvalidState";
    case ErrorCode::NoRetainedIterations: return "NoRetainedIterations";
    case ErrorCode::DegenerateCluster: return "DegenerateCluster";
    case ErrorCode::NoIdentifiedDraws: return "NoIdentifiedDraws";
    case ErrorCode::MatchingCardinalityMismatch: return "MatchingCardinalityMismatch";
    case ErrorCode::NotNormalGammaRun: return "NotNormalGammaRun";
    case ErrorCode::ParseError: return "ParseError";
    case ErrorCode::UnknownDataset: return "UnknownDataset";
    case ErrorCode::UnknownDesign: return "UnknownDesign";
    case ErrorCode::ChecksumMismatch: return "ChecksumMismatch";
    case ErrorCode::Io: return "Io";
  }
  return "Unknown";
}

/// Every failure raised by the library carries one of the codes above so that
/// callers (and the CLI's error document) can dispatch on it.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(std::string(to_string(code)) + ": " + message), code_(code), detail_(message) {}

  ErrorCode code() const noexcept { return code_; }
  /// The message without the code prefix.
  const std::string& detail() const noexcept { return detail_; }

 private:
  ErrorCode code_;
  std::string detail_;
};

[[noreturn]] inline void fail(ErrorCode code, const std::string& message) {
  throw Error(code, message);
}

}  // namespace sparsemix
