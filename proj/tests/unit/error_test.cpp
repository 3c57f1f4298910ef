#include <gtest/gtest.h>

#include <set>
#include <string>

#include "rwl1/error.hpp"

namespace rwl1 {
namespace {

TEST(Error, CarriesCodeAndMessage) {
  try {
    fail(ErrorCode::kInfeasible, "no point");
    FAIL() << "fail() returned";
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kInfeasible);
    EXPECT_NE(std::string(e.what()).find("no point"), std::string::npos);
  }
}

TEST(Error, RequirePassesThroughWhenTrue) {
  EXPECT_NO_THROW(require(true, ErrorCode::kIo, "unused"));
  EXPECT_THROW(require(false, ErrorCode::kIo, "x"), Error);
}

TEST(Error, CodeNamesAreDistinct) {
  std::set<std::string> names;
  for (auto c : {ErrorCode::kInvalidArgument, ErrorCode::kUndefinedAccuracy, ErrorCode::kInfeasible,
                 ErrorCode::kFactorization, ErrorCode::kInvariantViolation,
                 ErrorCode::kConditionViolated, ErrorCode::kTooLarge,
                 ErrorCode::kHypothesisViolated, ErrorCode::kDegenerate,
                 ErrorCode::kUndefinedCriterion, ErrorCode::kIo})
    names.insert(std::string(to_string(c)));
  EXPECT_EQ(names.size(), 11u);
}

}  // namespace
}  // namespace rwl1
