#pragma once

#include <iosfwd>

namespace guided::cli {

enum ExitCode : int {
  kOk = 0,
  kVerifyFailed = 1,
  kUsage = 2,
  kNumerical = 3,
};

/// Entry point shared by the guided_recon binary and the tests.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace guided::cli
