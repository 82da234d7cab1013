#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

namespace sclaw {

struct CheckResult {
  std::string name;
  bool passed = false;
  double value = 0.0;
  double threshold = 0.0;
  std::string detail;
};

/// Short self-checks against closed forms: heat decay, OU one-step
/// variance, pathwise L1 contraction, energy balance, flux pairing and
/// Parseval. Runs in a few seconds.
std::vector<CheckResult> validation_suite(std::uint64_t seed);

/// "PASS name value threshold detail" / "FAIL ..." per line.
void print_checks(const std::vector<CheckResult>& checks, std::ostream& out);

}  // namespace sclaw
