#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace sparsetree {

enum class ErrorCode {
  kDimensionMismatch,
  kInvalidArgument,
  kMaxIterationsExceeded,
  kInfeasibleSet,
  kUnbounded,
  kSamplingStalled,
  kVanishedCoordinate,
  kNotAChild,
  kEmptyChildSet,
  kPatternMismatch,
  kSizeLimitExceeded,
  kParseError,
};

std::string_view to_string(ErrorCode code);

// Every failure raised by the library carries one of the codes above so the
// CLI can map it onto an exit status.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what);
  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

[[noreturn]] void fail(ErrorCode code, const std::string& what);

}  // namespace sparsetree
