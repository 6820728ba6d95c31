// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <span>
#include <vector>

#include "faultloc/deadline.hpp"
#include "faultloc/formula/sat_oracle.hpp"

namespace faultloc::formula {

enum class MaxSatAlgorithm {
  kCoreGuided,    // stratified OLL with totalizers
  kLinearSearch,  // SAT-UNSAT search over a weighted totalizer
};

struct MaxSatOptions {
  MaxSatAlgorithm algorithm = MaxSatAlgorithm::kCoreGuided;
  bool stratify = true;
  /// Rounds of core re-solving before relaxation; 0 disables.
  int core_trim_rounds = 3;
  OracleFactory oracle = cdcl_factory();
  Deadline deadline;
};

struct MaxSatSolution {
  std::vector<bool> model;  // over the formula's variables, slot 0 unused
  Weight cost = 0;
  std::vector<std::size_t> falsified;  // soft clause indices, ascending
};

struct MaxSatStats {
  std::uint64_t oracle_calls = 0;
  std::uint64_t cores = 0;
};

/// Incremental weighted partial MaxSAT. compute() may be called again after
/// add_hard()/block(); each call returns an optimum of the current formula.
class MaxSatSolver {
 public:
  explicit MaxSatSolver(const WcnfFormula& w, MaxSatOptions options = {});
  ~MaxSatSolver();
  MaxSatSolver(const MaxSatSolver&) = delete;
  MaxSatSolver& operator=(const MaxSatSolver&) = delete;

  /// nullopt when the hard clauses are unsatisfiable.
  std::optional<MaxSatSolution> compute();

  void add_hard(std::span<const Lit> clause);
  /// Requires at least one of the given soft clauses to be satisfied.
  void block(std::span<const std::size_t> soft_indices);

  MaxSatStats stats() const;

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

/// Throws NoDiagnosisError when the hard part is unsatisfiable.
MaxSatSolution maxsat_solve(const WcnfFormula& w,
                            const MaxSatOptions& options = {});

struct EnumerationOptions {
  MaxSatOptions maxsat;
  /// 0 means unbounded; otherwise BudgetExceededError past this count.
  std::size_t max_solutions = 0;
};

/// Every distinct set of falsified soft clauses attained at the optimal
/// cost, in discovery order. Each found set is blocked with the disjunction
/// of its soft clauses. Throws NoDiagnosisError on unsatisfiable hard part.
std::vector<std::vector<std::size_t>> enumerate_optimal_solutions(
    const WcnfFormula& w, const EnumerationOptions& options = {},
    MaxSatStats* stats = nullptr);

/// All minimal correction subsets of `soft` (given as unit literals)
/// relative to `hard`, as ascending index sets, by non-decreasing size.
/// Empty when hard plus soft is consistent. Throws NoDiagnosisError when
/// hard is unsatisfiable.
std::vector<std::vector<std::size_t>> enumerate_mcses(
    const CnfFormula& hard, std::span<const Lit> soft,
    const EnumerationOptions& options = {}, MaxSatStats* stats = nullptr);

}  // namespace faultloc::formula
