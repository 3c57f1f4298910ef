#include "rwl1/error.hpp"

namespace rwl1 {

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::kInvalidArgument: return "invalid-argument";
    case ErrorCode::kUndefinedAccuracy: return "undefined-accuracy";
    case ErrorCode::kInfeasible: return "infeasible";
    case ErrorCode::kFactorization: return "factorization";
    case ErrorCode::kInvariantViolation: return "invariant-violation";
    case ErrorCode::kConditionViolated: return "condition-violated";
    case ErrorCode::kTooLarge: return "too-large";
    case ErrorCode::kHypothesisViolated: return "hypothesis-violated";
    case ErrorCode::kDegenerate: return "degenerate";
    case ErrorCode::kUndefinedCriterion: return "undefined-criterion";
    case ErrorCode::kIo: return "io";
  }
  return "unknown";
}

Error::Error(ErrorCode code, const std::string& what)
    : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

void fail(ErrorCode code, const std::string& what) { throw Error(code, what); }

}  // namespace rwl1
