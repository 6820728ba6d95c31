// SPDX-License-Identifier: Apache-2.0
#include "faultloc/engines/problem.hpp"

#include <algorithm>
#include <set>

#include "faultloc/circuit/encode.hpp"
#include "faultloc/error.hpp"
#include "faultloc/formula/sat_oracle.hpp"
#include "faultloc/minilang/compile.hpp"

namespace faultloc::engines {

using formula::Lit;
using formula::WcnfFormula;

Weight DiagnosisProblem::weight_of(const std::string& component) const {
  return unified.soft[index_of(component)].weight;
}

std::size_t DiagnosisProblem::index_of(const std::string& component) const {
  const auto& order = health.components();
  auto it = std::find(order.begin(), order.end(), component);
  if (it == order.end()) throw PreconditionError("unknown component '" + component + "'");
  return static_cast<std::size_t>(it - order.begin());
}

void DiagnosisProblem::check() const {
  const auto& order = health.components();
  auto same_soft = [&](const WcnfFormula& w) {
    if (w.soft.size() != order.size()) return false;
    for (std::size_t i = 0; i < order.size(); ++i)
      if (w.soft[i].lits != formula::Clause{Lit::pos(health.at(order[i]))}) return false;
    return true;
  };
  if (!same_soft(unified)) throw PreconditionError("soft clauses do not match health map");
  for (const WcnfFormula& w : per_observation)
    if (w.soft != unified.soft) throw PreconditionError("observation soft clauses differ");
}

namespace {

WcnfFormula with_softs(const formula::CnfFormula& hard, const WcnfFormula& unified) {
  WcnfFormula w;
  w.hard = hard;
  w.hard.ensure_vars(unified.num_vars());
  w.soft = unified.soft;
  return w;
}

}  // namespace

DiagnosisProblem from_circuit(const circuit::InstrumentedCircuitFormula& f) {
  DiagnosisProblem p;
  p.unified = f.wcnf;
  p.health = f.health;
  for (const auto& cnf : f.per_observation) p.per_observation.push_back(with_softs(cnf, f.wcnf));
  return p;
}

DiagnosisProblem from_trace(const minilang::TraceFormula& tf) {
  DiagnosisProblem p;
  p.unified = tf.wcnf;
  p.health = tf.health;
  for (const auto& cnf : tf.per_scope) p.per_observation.push_back(with_softs(cnf, tf.wcnf));
  for (std::size_t i = 0; i < tf.relax.size(); ++i)
    if (tf.relax[i].shared()) {
      p.component_lines[tf.relax[i].name] = tf.relax[i].line;
      if (tf.relax[i].io) p.io_components.insert(tf.relax[i].name);
    }
  return p;
}

DiagnosisProblem from_wcnf(const WcnfFormula& w, std::vector<std::string> names) {
  if (!names.empty() && names.size() != w.soft.size())
    throw PreconditionError("component names do not match soft clauses");
  DiagnosisProblem p;
  p.unified = w;
  for (std::size_t i = 0; i < w.soft.size(); ++i) {
    const auto& lits = w.soft[i].lits;
    if (lits.size() != 1 || lits[0].negated())
      throw PreconditionError("soft clause " + std::to_string(i) + " is not a positive unit");
    p.health.add(names.empty() ? "s" + std::to_string(i) : names[i], lits[0].var());
  }
  p.per_observation.push_back(w);
  return p;
}

Diagnosis make_diagnosis(const DiagnosisProblem& p, const std::vector<std::string>& components) {
  std::set<std::size_t> idx;
  for (const std::string& c : components) idx.insert(p.index_of(c));
  Diagnosis d;
  for (std::size_t i : idx) {
    d.components.push_back(p.components()[i]);
    d.cost += p.unified.soft[i].weight;
  }
  return d;
}

std::vector<int> lines_of(const DiagnosisProblem& p, const Diagnosis& d) {
  std::set<int> lines;
  for (const std::string& c : d.components) {
    auto it = p.component_lines.find(c);
    if (it != p.component_lines.end()) lines.insert(it->second);
  }
  return {lines.begin(), lines.end()};
}

namespace {

std::vector<Lit> fixing(const DiagnosisProblem& p, const std::vector<std::string>& off) {
  std::set<std::string> drop(off.begin(), off.end());
  std::vector<Lit> as;
  for (const std::string& c : p.components()) {
    Lit h = Lit::pos(p.health.at(c));
    as.push_back(drop.count(c) ? ~h : h);
  }
  return as;
}

}  // namespace

bool validate_diagnosis(const DiagnosisProblem& p, const Diagnosis& d, const Deadline& deadline) {
  auto oracle = formula::cdcl_factory()();
  oracle->set_deadline(deadline);
  oracle->add_formula(p.unified.hard);
  auto as = fixing(p, d.components);
  return oracle->solve(as).sat();
}

std::vector<Diagnosis> brute_force_diagnoses(const DiagnosisProblem& p,
                                             std::size_t max_cardinality) {
  const std::size_t n = p.components().size();
  auto oracle = formula::cdcl_factory()();
  oracle->add_formula(p.unified.hard);
  std::vector<std::vector<std::size_t>> found;
  std::vector<Diagnosis> out;
  std::vector<std::size_t> pick;
  // Subsets of size k in lexicographic order.
  for (std::size_t k = 0; k <= std::min(max_cardinality, n); ++k) {
    pick.resize(k);
    for (std::size_t i = 0; i < k; ++i) pick[i] = i;
    for (;;) {
      bool superset = std::any_of(found.begin(), found.end(), [&](const auto& f) {
        return std::includes(pick.begin(), pick.end(), f.begin(), f.end());
      });
      if (!superset) {
        std::vector<std::string> names;
        for (std::size_t i : pick) names.push_back(p.components()[i]);
        if (oracle->solve(fixing(p, names)).sat()) {
          found.push_back(pick);
          out.push_back(make_diagnosis(p, names));
        }
      }
      // Next combination.
      std::size_t i = k;
      while (i > 0 && pick[i - 1] == n - k + i - 1) --i;
      if (i == 0) break;
      ++pick[i - 1];
      for (std::size_t j = i; j < k; ++j) pick[j] = pick[j - 1] + 1;
    }
  }
  return out;
}

}  // namespace faultloc::engines
