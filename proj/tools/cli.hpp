// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace faultloc::cli {

enum ExitCode : int {
  kOk = 0,
  kBadInput = 1,     // usage, parse or I/O error
  kNoDiagnosis = 2,  // no diagnosis exists or none validates
  kBudget = 3,       // enumeration or time budget exceeded
};

/// Runs one invocation. `args` excludes the program name. JSON goes to
/// `out`, human-readable messages to `err`.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace faultloc::cli
