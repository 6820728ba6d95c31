// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <functional>
#include <vector>

#include "faultloc/circuit/circuit.hpp"
#include "faultloc/circuit/faults.hpp"
#include "faultloc/formula/types.hpp"

namespace faultloc::circuit {

/// Multi-observation instrumented encoding. Variable layout: health
/// variables 1..|gates| in gate order, then one block per observation
/// holding that copy's signals (inputs, then gates) and XOR chain
/// auxiliaries.
struct InstrumentedCircuitFormula {
  formula::WcnfFormula wcnf;
  formula::HealthVarMap health;
  /// First variable of copy k minus one; signal s of copy k is
  /// offsets[k] + s + 1 with inputs numbered before gates.
  std::vector<int> offsets;
  /// Hard clauses of copy k alone (same variable numbering as wcnf).
  std::vector<formula::CnfFormula> per_observation;
};

/// Tseitin clauses of `y = kind(fanin)` appended to `out`, each prefixed by
/// `guard` when it is valid. `fresh` allocates auxiliaries for XOR chains.
/// A default-constructed guard means "unguarded".
void tseitin_gate(GateKind kind, formula::Lit y,
                  const std::vector<formula::Lit>& fanin, formula::Lit guard,
                  const std::function<formula::Lit()>& fresh,
                  std::vector<formula::Clause>& out);

/// Throws PreconditionError on an empty observation set or width mismatch.
InstrumentedCircuitFormula encode_instrumented(
    const Circuit& c, const std::vector<CircuitObservation>& obs);

}  // namespace faultloc::circuit
