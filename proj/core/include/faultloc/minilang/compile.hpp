// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <vector>

#include "faultloc/formula/types.hpp"
#include "faultloc/minilang/pipeline.hpp"

namespace faultloc::minilang {

struct CompileOptions {
  int bitwidth = 16;  // 8, 16 or 32
  /// When false, loops simply stop after `unwind` iterations.
  bool unwinding_assumptions = true;
};

/// Variable layout: shared relaxation variables 1..R in relaxation-map
/// order, then the TRUE constant, then else-branch variables, then
/// auxiliaries.
struct TraceFormula {
  formula::WcnfFormula wcnf;
  RelaxationMap relax;
  /// Variable of relax[i].
  std::vector<formula::Var> relax_vars;
  /// Shared relaxation variable name -> variable.
  formula::HealthVarMap health;
  /// Hard clauses of scope k alone (same numbering as wcnf).
  std::vector<formula::CnfFormula> per_scope;
  int bitwidth = 16;
  int unwind = 8;

  /// Source line of a shared relaxation variable.
  int line_of(const std::string& component) const;
};

/// Guarded SSA over bit vectors: every assignment becomes
/// x' = (path && alive && rv) ? e : x. Each scope asserts that its printed
/// sequence equals the expected one. Soft clauses are the shared
/// relaxation variables with their weights. Throws PreconditionError on a
/// bad bitwidth.
TraceFormula compile_trace_formula(const InstrumentedProgram& p,
                                   const CompileOptions& options = {});

struct PipelineOptions {
  int unwind = 8;
  int bitwidth = 16;
  WeightMode weights = WeightMode::kHierarchical;
  Weight io_penalty = 1000;
  bool unwinding_assumptions = true;
};

/// unroll, instrument, weigh, compile.
TraceFormula build_trace_formula(const Program& p, const std::vector<TestCase>& failing,
                                 const PipelineOptions& options = {});

/// Throws UnwindInsufficientError when the hard part is unsatisfiable only
/// because of the unwinding assumptions, NoDiagnosisError when it is
/// unsatisfiable regardless.
void check_trace_formula(const TraceFormula& tf, const Program& p,
                         const std::vector<TestCase>& failing,
                         const PipelineOptions& options);

}  // namespace faultloc::minilang
