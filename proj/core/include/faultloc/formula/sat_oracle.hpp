// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <functional>
#include <memory>
#include <span>
#include <string>

#include "faultloc/deadline.hpp"
#include "faultloc/formula/types.hpp"

namespace faultloc::formula {

/// Incremental SAT oracle: clauses accumulate, each solve() call takes its
/// own assumption literals. An UNSAT answer carries a core that is a subset
/// of the assumptions; an empty core means the clauses alone are UNSAT.
///
/// Instances are single-threaded and not shareable.
class SatOracle {
 public:
  virtual ~SatOracle() = default;

  virtual void ensure_vars(int n) = 0;
  virtual int num_vars() const = 0;
  virtual void add_clause(std::span<const Lit> clause) = 0;
  virtual SatOutcome solve(std::span<const Lit> assumptions) = 0;

  /// Deadline honoured inside solve(); expiry raises TimeoutError.
  virtual void set_deadline(const Deadline& deadline) = 0;

  /// Number of solve() calls made so far.
  std::uint64_t calls() const { return calls_; }

  void add_formula(const CnfFormula& f) {
    ensure_vars(f.num_vars());
    for (const Clause& c : f.clauses()) add_clause(c);
  }
  void add_clause(std::initializer_list<Lit> clause) {
    add_clause(std::span<const Lit>(clause.begin(), clause.size()));
  }
  SatOutcome solve() { return solve(std::span<const Lit>{}); }

 protected:
  std::uint64_t calls_ = 0;
};

using OracleFactory = std::function<std::unique_ptr<SatOracle>()>;

/// Factory for the embedded CDCL solver.
OracleFactory cdcl_factory();

/// Factory for an external DIMACS solver process (debugging aid). The
/// command receives the path of a CNF file (assumptions appended as units)
/// and must print a `s SATISFIABLE` / `s UNSATISFIABLE` line and `v` lines.
/// UNSAT answers report the full assumption set as the core.
OracleFactory external_factory(std::string command);

/// One-shot solve: checks well-formedness, loads `f` into a fresh embedded
/// solver and solves under `assumptions`.
SatOutcome sat_solve(const CnfFormula& f, std::span<const Lit> assumptions = {});

}  // namespace faultloc::formula
