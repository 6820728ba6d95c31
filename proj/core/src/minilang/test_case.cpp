// SPDX-License-Identifier: Apache-2.0
#include "faultloc/minilang/test_case.hpp"

#include <nlohmann/json.hpp>

#include "faultloc/error.hpp"

namespace faultloc::minilang {

using nlohmann::json;

std::vector<TestCase> parse_tests(std::string_view json_text) {
  json doc;
  try {
    doc = json::parse(json_text);
  } catch (const json::parse_error& e) {
    throw ParseError(std::string("tests: ") + e.what());
  }
  if (!doc.is_object() || !doc.contains("tests") || !doc["tests"].is_array())
    throw ParseError("tests: expected an object with a \"tests\" array");
  std::vector<TestCase> out;
  for (const json& t : doc["tests"]) {
    TestCase tc;
    auto read_ints = [&](const char* key, std::vector<std::int64_t>& dst) {
      if (!t.is_object() || !t.contains(key) || !t[key].is_array())
        throw ParseError(std::string("tests: entry ") + std::to_string(out.size()) +
                         " needs an integer array \"" + key + "\"");
      for (const json& v : t[key]) {
        if (!v.is_number_integer())
          throw ParseError(std::string("tests: non-integer value in \"") + key + "\"");
        dst.push_back(v.get<std::int64_t>());
      }
    };
    read_ints("in", tc.inputs);
    read_ints("out", tc.expected);
    out.push_back(std::move(tc));
  }
  return out;
}

std::string tests_to_json(const std::vector<TestCase>& tests) {
  json arr = json::array();
  for (const TestCase& t : tests) arr.push_back({{"in", t.inputs}, {"out", t.expected}});
  return json{{"tests", arr}}.dump();
}

}  // namespace faultloc::minilang
