// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "faultloc/minilang/ast.hpp"

namespace faultloc::minilang {

/// Two's-complement wrap of `v` to `bitwidth` bits, sign-extended.
std::int64_t wrap(std::int64_t v, int bitwidth);

/// Direct evaluation with wrap-around arithmetic. Comparisons and logical
/// operators yield 0 or 1. Throws PreconditionError on an unbound variable.
std::int64_t evaluate(const Expr& e, const std::map<std::string, std::int64_t>& env,
                      int bitwidth);

struct RunResult {
  std::vector<std::int64_t> outputs;
  /// False when the step limit was hit before the program finished.
  bool terminated = true;
};

/// Concrete execution. Uninitialised variables and reads past the end of
/// `inputs` yield 0.
RunResult run_program(const Program& p, const std::vector<std::int64_t>& inputs,
                      int bitwidth = 16, std::int64_t max_steps = 1'000'000);

}  // namespace faultloc::minilang
