// SPDX-License-Identifier: Apache-2.0
#include "faultloc/formula/maxsat.hpp"

#include <algorithm>
#include <limits>
#include <unordered_map>

#include "faultloc/error.hpp"
#include "faultloc/formula/cardinality.hpp"

namespace faultloc::formula {

struct MaxSatSolver::Impl {
  WcnfFormula w;
  MaxSatOptions opt;
  std::unique_ptr<SatOracle> oracle;
  bool hard_unsat = false;
  std::uint64_t cores = 0;

  // One selector per soft clause: assuming it true enforces the clause.
  std::vector<Lit> soft_sel;

  // Core-guided state.
  std::vector<Lit> sel_order;
  std::unordered_map<Lit, Weight> weight;
  std::unordered_map<Lit, std::pair<std::size_t, std::size_t>> sum_of;
  std::vector<Totalizer> tots;

  // Linear-search state.
  std::optional<WeightedTotalizer> gte;

  Impl(const WcnfFormula& formula, MaxSatOptions options)
      : w(formula), opt(std::move(options)) {
    w.validate();
    oracle = opt.oracle();
    oracle->set_deadline(opt.deadline);
    oracle->add_formula(w.hard);
    for (const SoftClause& s : w.soft) {
      Lit sel;
      if (s.lits.size() == 1) {
        sel = s.lits[0];
      } else {
        sel = fresh_lit(*oracle);
        Clause c{~sel};
        c.insert(c.end(), s.lits.begin(), s.lits.end());
        oracle->add_clause(c);
      }
      soft_sel.push_back(sel);
      auto [it, inserted] = weight.emplace(sel, 0);
      if (inserted) sel_order.push_back(sel);
      it->second += s.weight;
    }
  }

  MaxSatSolution make_solution(std::vector<bool> model) const {
    model.resize(static_cast<std::size_t>(w.num_vars()) + 1);
    MaxSatSolution s;
    s.cost = w.cost(model);
    s.falsified = w.falsified(model);
    s.model = std::move(model);
    return s;
  }

  std::optional<MaxSatSolution> compute() {
    if (hard_unsat) return std::nullopt;
    return opt.algorithm == MaxSatAlgorithm::kCoreGuided ? core_guided()
                                                         : linear_search();
  }

  // Largest active weight strictly below `bound`, or 0.
  Weight next_level(Weight bound) const {
    Weight best = 0;
    for (Lit l : sel_order) {
      Weight x = weight.at(l);
      if (x > 0 && x < bound) best = std::max(best, x);
    }
    return best;
  }

  std::optional<MaxSatSolution> core_guided() {
    Weight threshold =
        opt.stratify ? next_level(std::numeric_limits<Weight>::max()) : 1;
    if (threshold == 0) threshold = 1;
    std::vector<Lit> assumptions;
    for (;;) {
      opt.deadline.check();
      assumptions.clear();
      for (Lit l : sel_order)
        if (weight.at(l) >= threshold) assumptions.push_back(l);
      SatOutcome r = oracle->solve(assumptions);
      if (r.sat()) {
        Weight lower = opt.stratify ? next_level(threshold) : 0;
        if (lower > 0) {
          threshold = lower;
          continue;
        }
        return make_solution(std::move(r.model));
      }
      if (r.core.empty()) {
        hard_unsat = true;
        return std::nullopt;
      }
      std::vector<Lit> core = std::move(r.core);
      for (int round = 0; round < opt.core_trim_rounds && core.size() > 1;
           ++round) {
        SatOutcome t = oracle->solve(core);
        if (t.sat() || t.core.size() >= core.size()) break;
        core = std::move(t.core);
      }
      relax(core);
    }
  }

  void relax(const std::vector<Lit>& core) {
    ++cores;
    Weight minw = weight.at(core[0]);
    for (Lit l : core) minw = std::min(minw, weight.at(l));
    auto add_selector = [&](Lit sel, Weight wt) {
      auto [it, inserted] = weight.emplace(sel, 0);
      if (inserted) sel_order.push_back(sel);
      it->second += wt;
    };
    for (Lit l : core) {
      weight[l] -= minw;
      auto s = sum_of.find(l);
      if (s == sum_of.end()) continue;
      auto [t, k] = s->second;
      if (k + 1 < tots[t].outputs.size()) {
        Lit next = ~tots[t].outputs[k + 1];
        if (!sum_of.count(next)) sum_of.emplace(next, std::make_pair(t, k + 1));
        add_selector(next, minw);
      }
    }
    if (core.size() > 1) {
      std::vector<Lit> violated;
      violated.reserve(core.size());
      for (Lit l : core) violated.push_back(~l);
      tots.push_back(build_totalizer(*oracle, violated));
      Lit sel = ~tots.back().outputs[1];
      sum_of.emplace(sel, std::make_pair(tots.size() - 1, std::size_t{1}));
      add_selector(sel, minw);
    }
  }

  Weight selector_cost(const std::vector<bool>& model) const {
    Weight c = 0;
    for (std::size_t i = 0; i < soft_sel.size(); ++i)
      if (!soft_sel[i].eval(model)) c += w.soft[i].weight;
    return c;
  }

  std::optional<MaxSatSolution> linear_search() {
    SatOutcome r = oracle->solve();
    if (!r.sat()) {
      hard_unsat = true;
      return std::nullopt;
    }
    std::vector<bool> best = std::move(r.model);
    Weight bound = selector_cost(best);
    std::vector<Lit> assumptions;
    while (bound > 0) {
      opt.deadline.check();
      if (!gte || gte->cap < bound) {
        std::vector<std::pair<Lit, Weight>> inputs;
        for (std::size_t i = 0; i < soft_sel.size(); ++i)
          inputs.emplace_back(~soft_sel[i], w.soft[i].weight);
        gte = build_weighted_totalizer(*oracle, inputs, bound);
      }
      assumptions.clear();
      for (auto it = gte->outputs.lower_bound(bound); it != gte->outputs.end();
           ++it)
        assumptions.push_back(~it->second);
      r = oracle->solve(assumptions);
      if (!r.sat()) break;
      best = std::move(r.model);
      bound = selector_cost(best);
    }
    return make_solution(std::move(best));
  }
};

MaxSatSolver::MaxSatSolver(const WcnfFormula& w, MaxSatOptions options)
    : impl_(std::make_unique<Impl>(w, std::move(options))) {}

MaxSatSolver::~MaxSatSolver() = default;

std::optional<MaxSatSolution> MaxSatSolver::compute() {
  return impl_->compute();
}

void MaxSatSolver::add_hard(std::span<const Lit> clause) {
  for (Lit l : clause) impl_->oracle->ensure_vars(l.var());
  impl_->oracle->add_clause(clause);
}

void MaxSatSolver::block(std::span<const std::size_t> soft_indices) {
  Clause c;
  for (std::size_t i : soft_indices) {
    const Clause& lits = impl_->w.soft.at(i).lits;
    c.insert(c.end(), lits.begin(), lits.end());
  }
  if (normalize(c)) add_hard(c);
}

MaxSatStats MaxSatSolver::stats() const {
  return {impl_->oracle->calls(), impl_->cores};
}

MaxSatSolution maxsat_solve(const WcnfFormula& w, const MaxSatOptions& options) {
  MaxSatSolver solver(w, options);
  auto s = solver.compute();
  if (!s) throw NoDiagnosisError("hard clauses are unsatisfiable");
  return std::move(*s);
}

std::vector<std::vector<std::size_t>> enumerate_optimal_solutions(
    const WcnfFormula& w, const EnumerationOptions& options,
    MaxSatStats* stats) {
  MaxSatSolver solver(w, options.maxsat);
  auto cur = solver.compute();
  if (!cur) throw NoDiagnosisError("hard clauses are unsatisfiable");
  const Weight optimum = cur->cost;
  std::vector<std::vector<std::size_t>> out;
  for (;;) {
    out.push_back(cur->falsified);
    if (options.max_solutions && out.size() > options.max_solutions)
      throw BudgetExceededError("optimal-solution enumeration exceeded " +
                                std::to_string(options.max_solutions));
    if (cur->falsified.empty()) break;
    solver.block(cur->falsified);
    cur = solver.compute();
    if (!cur || cur->cost > optimum) break;
  }
  if (stats) *stats = solver.stats();
  return out;
}

std::vector<std::vector<std::size_t>> enumerate_mcses(
    const CnfFormula& hard, std::span<const Lit> soft,
    const EnumerationOptions& options, MaxSatStats* stats) {
  WcnfFormula w;
  w.hard = hard;
  for (Lit l : soft) {
    w.hard.ensure_vars(l.var());
    w.add_soft(l, 1);
  }
  MaxSatSolver solver(w, options.maxsat);
  auto cur = solver.compute();
  if (!cur) throw NoDiagnosisError("hard clauses are unsatisfiable");
  std::vector<std::vector<std::size_t>> out;
  while (cur && !cur->falsified.empty()) {
    out.push_back(cur->falsified);
    if (options.max_solutions && out.size() > options.max_solutions)
      throw BudgetExceededError("MCS enumeration exceeded " +
                                std::to_string(options.max_solutions));
    solver.block(cur->falsified);
    cur = solver.compute();
  }
  if (stats) *stats = solver.stats();
  return out;
}

}  // namespace faultloc::formula
