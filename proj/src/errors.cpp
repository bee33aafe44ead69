#include "sparsetree/errors.hpp"

namespace sparsetree {

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::kDimensionMismatch: return "DimensionMismatch";
    case ErrorCode::kInvalidArgument: return "InvalidArgument";
    case ErrorCode::kMaxIterationsExceeded: return "MaxIterationsExceeded";
    case ErrorCode::kInfeasibleSet: return "InfeasibleSet";
    case ErrorCode::kUnbounded: return "Unbounded";
    case ErrorCode::kSamplingStalled: return "SamplingStalled";
    case ErrorCode::kVanishedCoordinate: return "VanishedCoordinate";
    case ErrorCode::kNotAChild: return "NotAChild";
    case ErrorCode::kEmptyChildSet: return "EmptyChildSet";
    case ErrorCode::kPatternMismatch: return "PatternMismatch";
    case ErrorCode::kSizeLimitExceeded: return "SizeLimitExceeded";
    case ErrorCode::kParseError: return "ParseError";
  }
  return "Unknown";
}

Error::Error(ErrorCode code, const std::string& what)
    : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

void fail(ErrorCode code, const std::string& what) { throw Error(code, what); }

}  // namespace sparsetree
