// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "faultloc/formula/maxsat.hpp"

namespace faultloc::formula {

/// Incremental minimum-cost hitting sets over a fixed universe of component
/// ids. Sets to hit and blocked sets accumulate across solve() calls. A
/// blocked set B excludes every candidate that contains all of B.
class HittingSetSolver {
 public:
  /// `weights` defaults to 1 per element.
  explicit HittingSetSolver(std::vector<std::string> universe,
                            std::vector<Weight> weights = {},
                            MaxSatOptions options = {});
  ~HittingSetSolver();

  /// Throws PreconditionError on an element outside the universe.
  void add_set(const std::vector<std::string>& set);
  void block(const std::vector<std::string>& set);
  /// Candidates must contain an element of `pick_one` or omit an element
  /// of `drop_one`.
  void add_clause(const std::vector<std::string>& pick_one,
                  const std::vector<std::string>& drop_one);

  /// Minimum-cost hitting set, elements in universe order; nullopt once the
  /// constraints admit no hitting set.
  std::optional<std::vector<std::string>> solve();

  const std::vector<std::string>& universe() const { return universe_; }
  MaxSatStats stats() const;

 private:
  Clause encode(const std::vector<std::string>& set, bool negate) const;

  std::vector<std::string> universe_;
  std::unique_ptr<MaxSatSolver> solver_;
};

/// Minimum-cardinality hitting set of `sets` that contains no member of
/// `blocked` as a subset; nullopt when none exists. The universe is every
/// element mentioned in either argument.
std::optional<std::vector<std::string>> minimum_hitting_set(
    const std::vector<std::vector<std::string>>& sets,
    const std::vector<std::vector<std::string>>& blocked = {});

}  // namespace faultloc::formula
