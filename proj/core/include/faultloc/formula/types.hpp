// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <cstdlib>
#include <functional>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace faultloc::formula {

using Var = int;
using Weight = std::int64_t;

/// A propositional literal. Variables are 1-based; the literal is stored as
/// 2*var + negated so that a literal and its negation differ in the low bit.
class Lit {
 public:
  constexpr Lit() = default;

  static constexpr Lit pos(Var v) { return Lit(2 * v); }
  static constexpr Lit neg(Var v) { return Lit(2 * v + 1); }
  static constexpr Lit make(Var v, bool negated) {
    return Lit(2 * v + (negated ? 1 : 0));
  }
  /// From a DIMACS integer (non-zero).
  static constexpr Lit from_dimacs(int d) {
    return d > 0 ? pos(d) : neg(-d);
  }
  static constexpr Lit from_code(int code) { return Lit(code); }

  constexpr Var var() const { return code_ >> 1; }
  constexpr bool negated() const { return (code_ & 1) != 0; }
  constexpr int code() const { return code_; }
  constexpr int to_dimacs() const { return negated() ? -var() : var(); }
  constexpr bool valid() const { return code_ >= 2; }

  constexpr Lit operator~() const { return Lit(code_ ^ 1); }
  constexpr auto operator<=>(const Lit&) const = default;

  /// Value of this literal under a model indexed by variable.
  bool eval(const std::vector<bool>& model) const {
    return model[static_cast<std::size_t>(var())] != negated();
  }

 private:
  constexpr explicit Lit(int code) : code_(code) {}
  int code_ = 0;
};

using Clause = std::vector<Lit>;

/// Sorts the clause and removes duplicate literals. Returns false when the
/// clause is a tautology (contains x and not-x).
bool normalize(Clause& clause);

/// A conjunction of clauses over variables 1..num_vars.
class CnfFormula {
 public:
  CnfFormula() = default;
  explicit CnfFormula(int num_vars) : num_vars_(num_vars) {}

  int num_vars() const { return num_vars_; }
  const std::vector<Clause>& clauses() const { return clauses_; }
  std::size_t size() const { return clauses_.size(); }

  Var new_var() { return ++num_vars_; }
  void ensure_vars(int n) {
    if (n > num_vars_) num_vars_ = n;
  }

  /// Appends a clause, growing num_vars to cover its literals.
  void add_clause(Clause clause);
  void add_clause(std::initializer_list<int> dimacs);
  void append(const CnfFormula& other);

  /// Throws FormulaError when a literal has var 0 or var > num_vars.
  void validate() const;

  bool satisfied_by(const std::vector<bool>& model) const;

  friend bool operator==(const CnfFormula&, const CnfFormula&) = default;

 private:
  int num_vars_ = 0;
  std::vector<Clause> clauses_;
};

struct SoftClause {
  Clause lits;
  Weight weight = 1;
  friend bool operator==(const SoftClause&, const SoftClause&) = default;
};

/// Weighted partial MaxSAT formula: hard clauses plus weighted soft clauses.
class WcnfFormula {
 public:
  CnfFormula hard;
  std::vector<SoftClause> soft;

  int num_vars() const { return hard.num_vars(); }
  void add_soft(Clause lits, Weight weight);
  void add_soft(Lit lit, Weight weight) { add_soft(Clause{lit}, weight); }

  /// Weights >= 1 and all literals declared.
  void validate() const;

  /// Sum of weights of soft clauses falsified by `model`.
  Weight cost(const std::vector<bool>& model) const;
  /// Indices of soft clauses falsified by `model`, ascending.
  std::vector<std::size_t> falsified(const std::vector<bool>& model) const;
  Weight total_soft_weight() const;

  friend bool operator==(const WcnfFormula&, const WcnfFormula&) = default;
};

enum class SatStatus { kSat, kUnsat };

/// Result of one oracle call. Exactly one of model / core is meaningful:
/// model (indexed by variable, slot 0 unused) when SAT; core (a subset of
/// the assumptions) when UNSAT.
struct SatOutcome {
  SatStatus status = SatStatus::kUnsat;
  std::vector<bool> model;
  std::vector<Lit> core;

  bool sat() const { return status == SatStatus::kSat; }
};

/// Bidirectional component-id <-> variable map.
class HealthVarMap {
 public:
  /// Registers a component. Throws FormulaError on a duplicate id or var.
  void add(const std::string& component, Var var);

  std::optional<Var> var_of(const std::string& component) const;
  std::optional<std::string> component_of(Var var) const;
  Var at(const std::string& component) const;

  std::size_t size() const { return order_.size(); }
  /// Components in registration order.
  const std::vector<std::string>& components() const { return order_; }

 private:
  std::map<std::string, Var> by_name_;
  std::map<Var, std::string> by_var_;
  std::vector<std::string> order_;
};

}  // namespace faultloc::formula

template <>
struct std::hash<faultloc::formula::Lit> {
  std::size_t operator()(const faultloc::formula::Lit& l) const noexcept {
    return std::hash<int>{}(l.code());
  }
};
