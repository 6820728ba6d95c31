// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace faultloc::minilang {

/// One test: the values consumed by successive `read()` calls and the
/// values the program is expected to `print`, in order.
struct TestCase {
  std::vector<std::int64_t> inputs;
  std::vector<std::int64_t> expected;

  friend bool operator==(const TestCase&, const TestCase&) = default;
};

/// `{"tests":[{"in":[1,2,3],"out":[3]}, ...]}`. Throws ParseError.
std::vector<TestCase> parse_tests(std::string_view json_text);
std::string tests_to_json(const std::vector<TestCase>& tests);

}  // namespace faultloc::minilang
