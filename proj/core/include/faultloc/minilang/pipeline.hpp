// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <map>
#include <optional>
#include <string>
#include <tuple>
#include <vector>

#include "faultloc/formula/types.hpp"
#include "faultloc/minilang/ast.hpp"
#include "faultloc/minilang/test_case.hpp"

namespace faultloc::minilang {

using formula::Weight;

/// The program copy executing one failing test. Variables carry the suffix
/// `_<index>`; statement ids are those of the source program.
struct Scope {
  int index = 0;
  TestCase test;
  std::vector<Stmt> globals;
  std::vector<Stmt> body;
};

struct UnrolledProgram {
  Program source;
  std::vector<Scope> scopes;
};

/// One scope per failing test. Throws PreconditionError when `failing` is
/// empty.
UnrolledProgram unroll_program(const Program& p, const std::vector<TestCase>& failing);

enum class RelaxKind {
  kStatement,
  kIfCondition,
  kLoopCondition,
  kExpressionList,
  kElseBranch,
};

std::string_view to_string(RelaxKind kind);

/// A relaxation variable. Else-branch variables belong to one scope and
/// have weight 0; all others are shared by every scope.
struct RelaxVar {
  std::string name;  // rv5, rv6[2], ev7[1][0]_2
  int stmt_id = 0;
  int line = 0;
  RelaxKind kind = RelaxKind::kStatement;
  Weight weight = 1;
  /// Iteration indices of the enclosing loops, outermost first. Loop
  /// conditions append their own index (0..unwind).
  std::vector<int> iteration;
  bool io = false;
  int scope = -1;

  bool shared() const { return kind != RelaxKind::kElseBranch; }
};

/// Statement tree used for weighting. `relaxed` is false for declarations
/// without initialiser, returns and conditionless loops.
struct RelaxSite {
  int stmt_id = 0;
  int line = 0;
  RelaxKind kind = RelaxKind::kStatement;
  bool relaxed = true;
  bool io = false;
  std::vector<int> children;  // then/else/body statements, in order
  std::vector<int> items;     // for-loop expression-list items
  Weight weight = 1;
};

class RelaxationMap {
 public:
  /// Shared variables first (in program order), then else-branch variables
  /// scope by scope.
  const std::vector<RelaxVar>& vars() const { return vars_; }
  std::size_t size() const { return vars_.size(); }
  const RelaxVar& operator[](std::size_t i) const { return vars_[i]; }
  std::size_t num_shared() const;

  std::optional<std::size_t> find(int stmt_id, RelaxKind kind,
                                  const std::vector<int>& iteration,
                                  int scope = -1) const;
  /// Throws PreconditionError when missing.
  std::size_t at(int stmt_id, RelaxKind kind, const std::vector<int>& iteration,
                 int scope = -1) const;
  std::size_t add(RelaxVar v);

  std::map<int, RelaxSite> sites;
  std::vector<int> roots;  // top-level statement ids (globals, then body)

  /// Copies each site's weight onto its variables.
  void propagate_site_weights();

 private:
  using Key = std::tuple<int, int, std::vector<int>, int>;
  std::vector<RelaxVar> vars_;
  std::map<Key, std::size_t> index_;
};

struct InstrumentedProgram {
  UnrolledProgram unrolled;
  RelaxationMap relax;
  int unwind = 8;
};

/// Creates the relaxation variables: a guard per simple statement, a
/// relaxed selector (`rv ? cond : ev`) per if- and loop-condition, and a
/// guard per for-loop expression-list item. Inside loops each variable is
/// replicated per iteration; conditions get unwind+1 copies (the last one
/// decides the unwinding assumption). Weights are left at 1. Throws
/// PreconditionError when unwind < 1.
InstrumentedProgram instrument_program(UnrolledProgram u, int unwind);

enum class WeightMode {
  kFlat,          // every soft weight 1
  kHierarchical,  // condition = sum of the weights nested under it
  kHeight,        // condition = 1 + heaviest nested weight
};

/// Simple statements weigh 1 and `read`/`print` weigh io_penalty (except
/// in flat mode). Condition weights are floored at 1. Throws
/// PreconditionError when io_penalty < 1.
void assign_weights(RelaxationMap& r, WeightMode mode, Weight io_penalty = 1000);

WeightMode parse_weight_mode(std::string_view s);
std::string_view to_string(WeightMode m);

/// C-like listing of the instrumented source (one scope, loops rolled).
std::string render_instrumented(const InstrumentedProgram& p);

}  // namespace faultloc::minilang
