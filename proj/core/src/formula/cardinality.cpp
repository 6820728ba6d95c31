// SPDX-License-Identifier: Apache-2.0
#include "faultloc/formula/cardinality.hpp"

#include <algorithm>

namespace faultloc::formula {
namespace {

std::vector<Lit> merge_unary(SatOracle& oracle, std::span<const Lit> inputs) {
  if (inputs.size() == 1) return {inputs[0]};
  std::size_t half = inputs.size() / 2;
  std::vector<Lit> left = merge_unary(oracle, inputs.subspan(0, half));
  std::vector<Lit> right = merge_unary(oracle, inputs.subspan(half));
  std::vector<Lit> out(inputs.size());
  for (Lit& o : out) o = fresh_lit(oracle);
  std::vector<Lit> clause;
  for (std::size_t i = 0; i <= left.size(); ++i) {
    for (std::size_t j = 0; j <= right.size(); ++j) {
      if (i + j == 0) continue;
      clause.clear();
      if (i > 0) clause.push_back(~left[i - 1]);
      if (j > 0) clause.push_back(~right[j - 1]);
      clause.push_back(out[i + j - 1]);
      oracle.add_clause(clause);
    }
  }
  return out;
}

using SumMap = std::map<Weight, Lit>;

SumMap merge_weighted(SatOracle& oracle,
                      std::span<const std::pair<Lit, Weight>> inputs,
                      Weight cap) {
  if (inputs.size() == 1)
    return {{std::min(inputs[0].second, cap), inputs[0].first}};
  std::size_t half = inputs.size() / 2;
  SumMap left = merge_weighted(oracle, inputs.subspan(0, half), cap);
  SumMap right = merge_weighted(oracle, inputs.subspan(half), cap);
  SumMap out;
  auto output_for = [&](Weight v) {
    auto it = out.find(v);
    if (it != out.end()) return it->second;
    Lit l = fresh_lit(oracle);
    out.emplace(v, l);
    return l;
  };
  for (const auto& [v, l] : left) oracle.add_clause({~l, output_for(v)});
  for (const auto& [v, l] : right) oracle.add_clause({~l, output_for(v)});
  for (const auto& [a, la] : left)
    for (const auto& [b, lb] : right)
      oracle.add_clause({~la, ~lb, output_for(std::min(a + b, cap))});
  return out;
}

}  // namespace

Totalizer build_totalizer(SatOracle& oracle, std::span<const Lit> inputs) {
  Totalizer t;
  t.inputs.assign(inputs.begin(), inputs.end());
  if (!inputs.empty()) t.outputs = merge_unary(oracle, inputs);
  return t;
}

WeightedTotalizer build_weighted_totalizer(
    SatOracle& oracle, std::span<const std::pair<Lit, Weight>> inputs,
    Weight cap) {
  WeightedTotalizer t;
  t.cap = cap;
  if (!inputs.empty()) t.outputs = merge_weighted(oracle, inputs, cap);
  return t;
}

}  // namespace faultloc::formula
