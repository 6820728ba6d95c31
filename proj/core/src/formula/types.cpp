// SPDX-License-Identifier: Apache-2.0
#include "faultloc/formula/types.hpp"

#include <algorithm>

#include "faultloc/error.hpp"

namespace faultloc::formula {

bool normalize(Clause& clause) {
  std::sort(clause.begin(), clause.end());
  clause.erase(std::unique(clause.begin(), clause.end()), clause.end());
  for (std::size_t i = 1; i < clause.size(); ++i)
    if (clause[i].var() == clause[i - 1].var()) return false;
  return true;
}

void CnfFormula::add_clause(Clause clause) {
  for (Lit l : clause) {
    if (l.var() <= 0) throw FormulaError("literal over variable 0");
    ensure_vars(l.var());
  }
  clauses_.push_back(std::move(clause));
}

void CnfFormula::add_clause(std::initializer_list<int> dimacs) {
  Clause c;
  c.reserve(dimacs.size());
  for (int d : dimacs) {
    if (d == 0) throw FormulaError("literal over variable 0");
    c.push_back(Lit::from_dimacs(d));
  }
  add_clause(std::move(c));
}

void CnfFormula::append(const CnfFormula& other) {
  ensure_vars(other.num_vars());
  clauses_.insert(clauses_.end(), other.clauses_.begin(), other.clauses_.end());
}

void CnfFormula::validate() const {
  for (const Clause& c : clauses_)
    for (Lit l : c)
      if (l.var() <= 0 || l.var() > num_vars_)
        throw FormulaError("literal " + std::to_string(l.to_dimacs()) +
                           " outside 1.." + std::to_string(num_vars_));
}

bool CnfFormula::satisfied_by(const std::vector<bool>& model) const {
  return std::all_of(clauses_.begin(), clauses_.end(), [&](const Clause& c) {
    return std::any_of(c.begin(), c.end(),
                       [&](Lit l) { return l.eval(model); });
  });
}

void WcnfFormula::add_soft(Clause lits, Weight weight) {
  if (weight < 1) throw FormulaError("soft clause weight must be >= 1");
  for (Lit l : lits) {
    if (l.var() <= 0) throw FormulaError("literal over variable 0");
    hard.ensure_vars(l.var());
  }
  soft.push_back({std::move(lits), weight});
}

void WcnfFormula::validate() const {
  hard.validate();
  for (const SoftClause& s : soft) {
    if (s.weight < 1) throw FormulaError("soft clause weight must be >= 1");
    for (Lit l : s.lits)
      if (l.var() <= 0 || l.var() > hard.num_vars())
        throw FormulaError("soft literal " + std::to_string(l.to_dimacs()) +
                           " outside 1.." + std::to_string(hard.num_vars()));
  }
}

Weight WcnfFormula::cost(const std::vector<bool>& model) const {
  Weight total = 0;
  for (std::size_t i : falsified(model)) total += soft[i].weight;
  return total;
}

std::vector<std::size_t> WcnfFormula::falsified(
    const std::vector<bool>& model) const {
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < soft.size(); ++i) {
    const Clause& c = soft[i].lits;
    if (std::none_of(c.begin(), c.end(), [&](Lit l) { return l.eval(model); }))
      out.push_back(i);
  }
  return out;
}

Weight WcnfFormula::total_soft_weight() const {
  Weight total = 0;
  for (const SoftClause& s : soft) total += s.weight;
  return total;
}

void HealthVarMap::add(const std::string& component, Var var) {
  if (by_name_.count(component))
    throw FormulaError("duplicate component id '" + component + "'");
  if (by_var_.count(var))
    throw FormulaError("variable " + std::to_string(var) +
                       " already maps to a component");
  by_name_.emplace(component, var);
  by_var_.emplace(var, component);
  order_.push_back(component);
}

std::optional<Var> HealthVarMap::var_of(const std::string& component) const {
  auto it = by_name_.find(component);
  if (it == by_name_.end()) return std::nullopt;
  return it->second;
}

std::optional<std::string> HealthVarMap::component_of(Var var) const {
  auto it = by_var_.find(var);
  if (it == by_var_.end()) return std::nullopt;
  return it->second;
}

Var HealthVarMap::at(const std::string& component) const {
  auto v = var_of(component);
  if (!v) throw FormulaError("unknown component '" + component + "'");
  return *v;
}

}  // namespace faultloc::formula
