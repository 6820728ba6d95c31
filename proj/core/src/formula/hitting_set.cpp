// SPDX-License-Identifier: Apache-2.0
#include "faultloc/formula/hitting_set.hpp"

#include <algorithm>
#include <set>

#include "faultloc/error.hpp"

namespace faultloc::formula {

HittingSetSolver::HittingSetSolver(std::vector<std::string> universe,
                                   std::vector<Weight> weights,
                                   MaxSatOptions options)
    : universe_(std::move(universe)) {
  if (!weights.empty() && weights.size() != universe_.size())
    throw PreconditionError("hitting set: weights do not match universe");
  // pick_i is variable i+1; leaving an element out is the soft preference.
  WcnfFormula w;
  w.hard.ensure_vars(static_cast<int>(universe_.size()));
  for (std::size_t i = 0; i < universe_.size(); ++i)
    w.add_soft(Lit::neg(static_cast<Var>(i + 1)),
               weights.empty() ? 1 : weights[i]);
  solver_ = std::make_unique<MaxSatSolver>(w, std::move(options));
}

HittingSetSolver::~HittingSetSolver() = default;

Clause HittingSetSolver::encode(const std::vector<std::string>& set,
                                bool negate) const {
  Clause c;
  for (const std::string& e : set) {
    auto it = std::find(universe_.begin(), universe_.end(), e);
    if (it == universe_.end())
      throw PreconditionError("hitting set: unknown element '" + e + "'");
    c.push_back(Lit::make(static_cast<Var>(it - universe_.begin()) + 1, negate));
  }
  return c;
}

void HittingSetSolver::add_set(const std::vector<std::string>& set) {
  solver_->add_hard(encode(set, false));
}

void HittingSetSolver::block(const std::vector<std::string>& set) {
  solver_->add_hard(encode(set, true));
}

void HittingSetSolver::add_clause(const std::vector<std::string>& pick_one,
                                  const std::vector<std::string>& drop_one) {
  Clause c = encode(pick_one, false);
  Clause d = encode(drop_one, true);
  c.insert(c.end(), d.begin(), d.end());
  solver_->add_hard(c);
}

std::optional<std::vector<std::string>> HittingSetSolver::solve() {
  auto s = solver_->compute();
  if (!s) return std::nullopt;
  std::vector<std::string> out;
  for (std::size_t i = 0; i < universe_.size(); ++i)
    if (s->model[i + 1]) out.push_back(universe_[i]);
  return out;
}

MaxSatStats HittingSetSolver::stats() const { return solver_->stats(); }

std::optional<std::vector<std::string>> minimum_hitting_set(
    const std::vector<std::vector<std::string>>& sets,
    const std::vector<std::vector<std::string>>& blocked) {
  std::set<std::string> seen;
  std::vector<std::string> universe;
  for (const auto* group : {&sets, &blocked})
    for (const auto& s : *group)
      for (const std::string& e : s)
        if (seen.insert(e).second) universe.push_back(e);
  HittingSetSolver hs(universe);
  for (const auto& s : sets) hs.add_set(s);
  for (const auto& b : blocked) hs.block(b);
  return hs.solve();
}

}  // namespace faultloc::formula
