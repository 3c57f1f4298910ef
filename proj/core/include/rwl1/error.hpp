#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace rwl1 {

enum class ErrorCode {
  kInvalidArgument,
  kUndefinedAccuracy,
  kInfeasible,
  kFactorization,
  kInvariantViolation,
  kConditionViolated,
  kTooLarge,
  kHypothesisViolated,
  kDegenerate,
  kUndefinedCriterion,
  kIo,
};

std::string_view to_string(ErrorCode code);

/// Single exception type for the library; `code()` tells callers which
/// contract was broken without string matching.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what);

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

[[noreturn]] void fail(ErrorCode code, const std::string& what);

inline void require(bool ok, ErrorCode code, const std::string& what) {
  if (!ok) fail(code, what);
}

}  // namespace rwl1
