// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <ostream>

namespace ria::cli {

enum ExitCode : int {
  kOk = 0,
  kVerificationFailure = 1,
  kUsage = 2,
  kSearchExhausted = 3,
  kIoError = 4,
};

// Entry point shared by main() and the tests; never throws.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace ria::cli
