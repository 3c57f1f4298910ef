#pragma once

#include <cstddef>
#include <cstdint>
#include <ostream>
#include <string>
#include <vector>

namespace rwl1::cli {

struct CheckResult {
  std::string name;
  bool pass = false;
  std::string detail;
};

/// gamma / eta / c0 spot values, brute-force RIP on built-in matrices and the
/// decay-condition checker on constructed signals.
std::vector<CheckResult> theory_checks(std::uint64_t seed);

/// Intersection-accuracy formula examples and simulator agreement.
std::vector<CheckResult> prop2_checks(std::size_t trials, std::uint64_t seed);

/// Solver, driver and harness sanity checks on small seeded instances.
std::vector<CheckResult> solver_checks(std::uint64_t seed);

/// One "PASS name  detail" line per check; returns true iff all passed.
bool print_table(std::ostream& out, const std::vector<CheckResult>& checks);

}  // namespace rwl1::cli
