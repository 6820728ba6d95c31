// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "faultloc/formula/sat_oracle.hpp"

namespace faultloc::formula {

/// A compact MiniSat-style CDCL solver: two watched literals, VSIDS with
/// phase saving, first-UIP learning with clause minimisation, Luby
/// restarts and activity-based learnt-clause reduction. Deterministic: no
/// randomisation, so identical call sequences give identical answers.
class CdclSolver final : public SatOracle {
 public:
  struct Stats {
    std::uint64_t conflicts = 0;
    std::uint64_t decisions = 0;
    std::uint64_t propagations = 0;
    std::uint64_t restarts = 0;
  };

  CdclSolver();

  void ensure_vars(int n) override;
  int num_vars() const override { return num_vars_; }
  Var new_var() {
    ensure_vars(num_vars_ + 1);
    return num_vars_;
  }

  void add_clause(std::span<const Lit> clause) override;
  using SatOracle::add_clause;
  SatOutcome solve(std::span<const Lit> assumptions) override;
  using SatOracle::solve;
  void set_deadline(const Deadline& deadline) override { deadline_ = deadline; }

  /// False once the clause set is known to be UNSAT without assumptions.
  bool okay() const { return ok_; }
  const Stats& stats() const { return stats_; }

 private:
  using CRef = std::uint32_t;
  static constexpr CRef kNoReason = 0xffffffffu;

  struct ClauseData {
    std::vector<int> lits;  // internal literal codes
    double activity = 0;
    bool learnt = false;
    bool deleted = false;
  };
  struct Watcher {
    CRef cref;
    int blocker;
  };
  enum : std::int8_t { kFalse = -1, kUndef = 0, kTrue = 1 };

  // Internal literal code: 2*(var-1) + sign, var index 0-based.
  static int code(Lit l) { return 2 * (l.var() - 1) + (l.negated() ? 1 : 0); }
  static Lit external(int c) { return Lit::make(c / 2 + 1, (c & 1) != 0); }
  static int var_of(int c) { return c >> 1; }

  std::int8_t value(int lit) const {
    std::int8_t v = assigns_[var_of(lit)];
    return (lit & 1) ? static_cast<std::int8_t>(-v) : v;
  }
  int level() const { return static_cast<int>(trail_lim_.size()); }

  void enqueue(int lit, CRef reason);
  CRef propagate();
  void analyze(CRef conflict, std::vector<int>& learnt, int& bt_level);
  bool redundant(int lit, unsigned abstract_levels);
  void analyze_final(int falsified, std::vector<Lit>& core);
  void cancel_until(int lvl);
  int pick_branch();
  void attach(CRef cr);
  void reduce_db();
  void bump_var(int v);
  void bump_clause(ClauseData& c);
  void check_deadline();

  // Heap ordered by activity (max-heap of variables).
  void heap_insert(int v);
  void heap_up(int pos);
  void heap_down(int pos);
  int heap_pop();
  bool heap_contains(int v) const {
    return heap_pos_[static_cast<std::size_t>(v)] >= 0;
  }

  int num_vars_ = 0;
  bool ok_ = true;
  std::vector<ClauseData> clauses_;
  std::vector<CRef> learnts_;
  std::vector<std::vector<Watcher>> watches_;
  std::vector<std::int8_t> assigns_;
  std::vector<bool> polarity_;  // saved phase: true = negative
  std::vector<int> levels_;
  std::vector<CRef> reasons_;
  std::vector<double> activity_;
  std::vector<int> heap_;
  std::vector<int> heap_pos_;
  std::vector<char> seen_;
  std::vector<int> trail_;
  std::vector<int> trail_lim_;
  std::size_t qhead_ = 0;
  double var_inc_ = 1.0;
  double cla_inc_ = 1.0;
  double max_learnts_ = 0;
  std::vector<int> analyze_stack_;
  std::vector<int> analyze_clear_;
  Deadline deadline_;
  Stats stats_;
};

}  // namespace faultloc::formula
