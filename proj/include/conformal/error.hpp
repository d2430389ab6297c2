#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace conformal {

enum class ErrorCode {
  kDisconnected,
  kLoopEdge,
  kDuplicateEdge,
  kOutOfRange,
  kDisconnectedCirculant,
  kNotSymmetricGeneratingSet,
  kInvalidPresentation,
  kDimensionMismatch,
  kNegativeWeight,
  kAllZeroWeights,
  kNoConvergence,
  kNoSuchEigenvalue,
  kSizeCapExceeded,
  kTooManyOrbits,
  kMultiplicityNotOne,
  kNotPsd,
  kNotRegular,
  kComplementDisconnected,
  kNotAnEigenvector,
  kParseError,
};

constexpr std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::kDisconnected: return "Disconnected";
    case ErrorCode::kLoopEdge: return "LoopEdge";
    case ErrorCode::kDuplicateEdge: return "DuplicateEdge";
    case ErrorCode::kOutOfRange: return "OutOfRange";
    case ErrorCode::kDisconnectedCirculant: return "DisconnectedCirculant";
    case ErrorCode::kNotSymmetricGeneratingSet: return "NotSymmetricGeneratingSet";
    case ErrorCode::kInvalidPresentation: return "InvalidPresentation";
    case ErrorCode::kDimensionMismatch: return "DimensionMismatch";
    case ErrorCode::kNegativeWeight: return "NegativeWeight";
    case ErrorCode::kAllZeroWeights: return "AllZeroWeights";
    case ErrorCode::kNoConvergence: return "NoConvergence";
    case ErrorCode::kNoSuchEigenvalue: return "NoSuchEigenvalue";
    case ErrorCode::kSizeCapExceeded: return "SizeCapExceeded";
    case ErrorCode::kTooManyOrbits: return "TooManyOrbits";
    case ErrorCode::kMultiplicityNotOne: return "MultiplicityNotOne";
    case ErrorCode::kNotPsd: return "NotPSD";
    case ErrorCode::kNotRegular: return "NotRegular";
    case ErrorCode::kComplementDisconnected: return "ComplementDisconnected";
    case ErrorCode::kNotAnEigenvector: return "NotAnEigenvector";
    case ErrorCode::kParseError: return "ParseError";
  }
  return "Unknown";
}

/// Every failure raised by the library carries one of the codes above so
/// callers (and the CLI exit-code mapping) can branch without string matching.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace conformal
