// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <span>
#include <vector>

#include "faultloc/formula/sat_oracle.hpp"

namespace faultloc::formula {

/// Unit candidates are passed as the literal each unit clause asserts.

/// Returns S, a subset of `candidates`, with f plus S UNSAT. The subset is
/// read off the final conflict of an assumption-based solve. Throws
/// PreconditionError when f plus all candidates is satisfiable.
std::vector<Lit> extract_unsat_core(const CnfFormula& f,
                                    std::span<const Lit> candidates);

/// Deletion-based MUS extraction in the given order, with clause-set
/// refinement (each UNSAT answer shrinks the working set to its core).
/// Postcondition: f plus the result is UNSAT and dropping any single
/// element makes it SAT. Throws PreconditionError when f plus `core` is
/// satisfiable.
std::vector<Lit> minimize_core(const CnfFormula& f, std::span<const Lit> core);

/// Same, on an oracle that already holds f.
std::vector<Lit> minimize_core(SatOracle& oracle, std::span<const Lit> core);

}  // namespace faultloc::formula
