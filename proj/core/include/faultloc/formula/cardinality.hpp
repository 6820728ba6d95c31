// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <map>
#include <span>
#include <vector>

#include "faultloc/formula/sat_oracle.hpp"

namespace faultloc::formula {

/// Unary totalizer. outputs[k] is forced true whenever at least k+1 inputs
/// are true (only the upward implications are encoded, which is all that
/// upper-bound assumptions of the form "not outputs[k]" need).
struct Totalizer {
  std::vector<Lit> inputs;
  std::vector<Lit> outputs;
};

Totalizer build_totalizer(SatOracle& oracle, std::span<const Lit> inputs);

/// Generalized totalizer over weighted inputs. For every reachable partial
/// sum v up to `cap`, outputs[v] is forced true when the true inputs sum to
/// exactly v; sums above cap all map to outputs[cap]. Bounding the sum
/// below c is done by assuming "not outputs[v]" for every v >= c.
struct WeightedTotalizer {
  std::map<Weight, Lit> outputs;
  Weight cap = 0;
};

WeightedTotalizer build_weighted_totalizer(
    SatOracle& oracle, std::span<const std::pair<Lit, Weight>> inputs,
    Weight cap);

/// Fresh variable on an oracle.
inline Lit fresh_lit(SatOracle& oracle) {
  int v = oracle.num_vars() + 1;
  oracle.ensure_vars(v);
  return Lit::pos(v);
}

}  // namespace faultloc::formula
