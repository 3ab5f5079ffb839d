#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace guided {

struct VerifyOptions {
  // Added to every golden expectation. Nonzero values must make checks fail;
  // used to make sure the harness can fail at all.
  double perturbation = 0.0;
  std::uint64_t seed = 20240607;
  // Only run checks whose name contains this substring (empty: all).
  std::string filter;
};

struct CheckOutcome {
  std::string name;
  bool passed = false;
  std::string detail;
};

struct VerifyReport {
  std::vector<CheckOutcome> checks;
  bool all_passed() const;
};

struct CheckInfo {
  std::string name;
  std::string description;
};

std::vector<CheckInfo> list_checks();
VerifyReport run_verify(const VerifyOptions& opts = {});

}  // namespace guided
