// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "faultloc/deadline.hpp"
#include "faultloc/formula/types.hpp"

namespace faultloc::circuit {
struct InstrumentedCircuitFormula;
}
namespace faultloc::minilang {
struct TraceFormula;
}

namespace faultloc::engines {

using formula::Weight;

/// A diagnosis problem with shared health variables. Soft clause i of every
/// formula is the positive health unit of components()[i].
struct DiagnosisProblem {
  /// All observations at once.
  formula::WcnfFormula unified;
  /// One replica per observation, same soft clauses as `unified`.
  std::vector<formula::WcnfFormula> per_observation;
  formula::HealthVarMap health;
  /// Source line per component (programs only).
  std::map<std::string, int> component_lines;
  /// Components that are read or print statements (programs only).
  std::set<std::string> io_components;

  const std::vector<std::string>& components() const { return health.components(); }
  Weight weight_of(const std::string& component) const;
  /// Soft index of each component, following components().
  std::size_t index_of(const std::string& component) const;
  /// Throws PreconditionError when the invariants above do not hold.
  void check() const;
};

DiagnosisProblem from_circuit(const circuit::InstrumentedCircuitFormula& f);
DiagnosisProblem from_trace(const minilang::TraceFormula& tf);
/// Single-observation problem over a plain WCNF whose soft clauses are
/// positive units; components are named by `names` (default "s<index>").
DiagnosisProblem from_wcnf(const formula::WcnfFormula& w,
                           std::vector<std::string> names = {});

/// Components to deactivate, in components() order.
struct Diagnosis {
  std::vector<std::string> components;
  Weight cost = 0;

  friend bool operator==(const Diagnosis&, const Diagnosis&) = default;
};

/// Builds a diagnosis from component ids (any order, duplicates dropped).
Diagnosis make_diagnosis(const DiagnosisProblem& p, const std::vector<std::string>& components);
/// Sorted line numbers of a program diagnosis.
std::vector<int> lines_of(const DiagnosisProblem& p, const Diagnosis& d);

/// One SAT call on the unified hard part with every health variable fixed:
/// off for members of `d`, on for the rest.
bool validate_diagnosis(const DiagnosisProblem& p, const Diagnosis& d,
                        const Deadline& deadline = {});

/// All subset-minimal diagnoses with at most `max_cardinality` components,
/// by increasing size with superset pruning.
std::vector<Diagnosis> brute_force_diagnoses(const DiagnosisProblem& p,
                                             std::size_t max_cardinality);

}  // namespace faultloc::engines
