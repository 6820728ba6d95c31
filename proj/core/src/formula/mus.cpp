// SPDX-License-Identifier: Apache-2.0
#include "faultloc/formula/mus.hpp"

#include <algorithm>
#include <unordered_set>

#include "faultloc/error.hpp"
#include "faultloc/formula/cdcl_solver.hpp"

namespace faultloc::formula {

std::vector<Lit> extract_unsat_core(const CnfFormula& f,
                                    std::span<const Lit> candidates) {
  f.validate();
  CdclSolver solver;
  solver.add_formula(f);
  SatOutcome r = solver.solve(candidates);
  if (r.sat())
    throw PreconditionError(
        "extract_unsat_core: formula plus candidates is satisfiable");
  // Report in candidate order.
  std::unordered_set<Lit> in_core(r.core.begin(), r.core.end());
  std::vector<Lit> out;
  for (Lit c : candidates)
    if (in_core.erase(c)) out.push_back(c);
  return out;
}

std::vector<Lit> minimize_core(SatOracle& oracle, std::span<const Lit> core) {
  std::vector<Lit> mus;
  {
    std::unordered_set<Lit> seen;
    for (Lit l : core)
      if (seen.insert(l).second) mus.push_back(l);
  }
  SatOutcome first = oracle.solve(mus);
  if (first.sat())
    throw PreconditionError("minimize_core: formula plus core is satisfiable");

  std::vector<Lit> trial;
  std::size_t i = 0;
  while (i < mus.size()) {
    trial.clear();
    for (std::size_t k = 0; k < mus.size(); ++k)
      if (k != i) trial.push_back(mus[k]);
    SatOutcome r = oracle.solve(trial);
    if (r.sat()) {
      ++i;
      continue;
    }
    // Every element before i is necessary, hence present in r.core.
    std::unordered_set<Lit> keep(r.core.begin(), r.core.end());
    mus.clear();
    for (Lit l : trial)
      if (keep.count(l)) mus.push_back(l);
  }
  return mus;
}

std::vector<Lit> minimize_core(const CnfFormula& f, std::span<const Lit> core) {
  f.validate();
  CdclSolver solver;
  solver.add_formula(f);
  return minimize_core(solver, core);
}

}  // namespace faultloc::formula
