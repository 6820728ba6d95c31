// SPDX-License-Identifier: Apache-2.0
#include "faultloc/minilang/compile.hpp"

#include <map>

#include "faultloc/error.hpp"
#include "faultloc/formula/sat_oracle.hpp"
#include "faultloc/minilang/bitblast.hpp"

namespace faultloc::minilang {

using formula::Var;

int TraceFormula::line_of(const std::string& component) const {
  Var v = health.at(component);
  for (std::size_t i = 0; i < relax.size(); ++i)
    if (relax_vars[i] == v) return relax[i].line;
  throw PreconditionError("unknown component " + component);
}

namespace {

class ScopeCompiler {
 public:
  ScopeCompiler(BitBlaster& bb, const InstrumentedProgram& p, const std::vector<Var>& vars,
                const Scope& scope, bool assume_unwind)
      : bb_(bb), p_(p), vars_(vars), scope_(scope), assume_(assume_unwind) {
    alive_ = bb.t();
    in_pos_.assign(scope.test.inputs.size() + 1, bb.f());
    in_pos_[0] = bb.t();
    out_pos_.assign(scope.test.expected.size() + 2, bb.f());
    out_pos_[0] = bb.t();
  }

  void run() {
    block(scope_.globals, bb_.t());
    block(scope_.body, bb_.t());
    // Exactly the expected number of prints.
    bb_.add({out_pos_[scope_.test.expected.size()]});
  }

 private:
  Lit relax_lit(int id, RelaxKind kind, int scope = -1) const {
    return Lit::pos(vars_[p_.relax.at(id, kind, iters_, scope)]);
  }

  Lit enabled(Lit g, const Stmt& s, RelaxKind kind) {
    return bb_.and2(bb_.and2(g, alive_), relax_lit(s.id, kind));
  }

  BitVec eval(const Expr& e) {
    return bb_.eval(e, [this](const std::string& name) -> const BitVec& {
      auto it = env_.find(name);
      if (it == env_.end()) throw PreconditionError("unbound variable " + name);
      return it->second;
    });
  }

  Lit condition(const Stmt& s, RelaxKind kind) {
    if (!s.expr) return bb_.t();
    Lit c = bb_.to_bool(eval(*s.expr));
    return bb_.ite(relax_lit(s.id, kind), c, relax_lit(s.id, RelaxKind::kElseBranch, scope_.index));
  }

  // One-hot position advanced by one when `e`; the last slot absorbs.
  void advance(std::vector<Lit>& pos, Lit e) {
    std::vector<Lit> next(pos.size());
    const std::size_t last = pos.size() - 1;
    for (std::size_t k = 0; k <= last; ++k) {
      Lit moved = k == 0 ? bb_.f() : pos[k - 1];
      if (k == last) moved = bb_.or2(moved, pos[k]);
      next[k] = bb_.ite(e, moved, pos[k]);
    }
    pos = std::move(next);
  }

  void assign(const Stmt& s, Lit e) {
    BitVec v = eval(*s.expr);
    env_[s.target] = bb_.ite(e, v, env_.at(s.target));
  }

  void block(const std::vector<Stmt>& stmts, Lit g) {
    for (const Stmt& s : stmts) stmt(s, g);
  }

  void stmt(const Stmt& s, Lit g) {
    switch (s.kind) {
      case StmtKind::kDecl: {
        BitVec init = bb_.fresh_vec();
        if (s.expr) init = bb_.ite(enabled(g, s, RelaxKind::kStatement), eval(*s.expr), init);
        env_[s.target] = std::move(init);
        return;
      }
      case StmtKind::kAssign: assign(s, enabled(g, s, RelaxKind::kStatement)); return;
      case StmtKind::kRead: {
        Lit e = enabled(g, s, RelaxKind::kStatement);
        const auto& in = scope_.test.inputs;
        BitVec v = bb_.fresh_vec();  // past the end: nondeterministic
        for (std::size_t k = in.size(); k-- > 0;) v = bb_.ite(in_pos_[k], bb_.constant(in[k]), v);
        env_[s.target] = bb_.ite(e, v, env_.at(s.target));
        advance(in_pos_, e);
        return;
      }
      case StmtKind::kPrint: {
        Lit e = enabled(g, s, RelaxKind::kStatement);
        BitVec v = eval(*s.expr);
        const auto& out = scope_.test.expected;
        for (std::size_t k = 0; k < out.size(); ++k)
          if (!bb_.is_false(out_pos_[k]))
            bb_.add({~e, ~out_pos_[k], bb_.eq(v, bb_.constant(out[k]))});
        advance(out_pos_, e);
        return;
      }
      case StmtKind::kReturn: alive_ = bb_.and2(alive_, ~g); return;
      case StmtKind::kIf: {
        Lit c = condition(s, RelaxKind::kIfCondition);
        block(s.body, bb_.and2(g, c));
        block(s.orelse, bb_.and2(g, ~c));
        return;
      }
      case StmtKind::kWhile:
      case StmtKind::kFor: loop(s, g); return;
    }
  }

  void loop(const Stmt& s, Lit g) {
    for (const Stmt& item : s.init) assign(item, enabled(g, item, RelaxKind::kExpressionList));
    const int unwind = p_.unwind;
    Lit gi = g;
    for (int i = 0; i <= unwind; ++i) {
      iters_.push_back(i);
      Lit c = condition(s, RelaxKind::kLoopCondition);
      if (i == unwind) {
        if (assume_) bb_.add({~gi, ~alive_, ~c});
      } else {
        gi = bb_.and2(gi, c);
        block(s.body, gi);
        for (const Stmt& item : s.update)
          assign(item, enabled(gi, item, RelaxKind::kExpressionList));
      }
      iters_.pop_back();
    }
  }

  BitBlaster& bb_;
  const InstrumentedProgram& p_;
  const std::vector<Var>& vars_;
  const Scope& scope_;
  bool assume_;
  std::map<std::string, BitVec> env_;
  Lit alive_;
  std::vector<Lit> in_pos_, out_pos_;
  std::vector<int> iters_;
};

}  // namespace

TraceFormula compile_trace_formula(const InstrumentedProgram& p, const CompileOptions& options) {
  if (options.bitwidth != 8 && options.bitwidth != 16 && options.bitwidth != 32)
    throw PreconditionError("bitwidth must be 8, 16 or 32");
  TraceFormula tf;
  tf.relax = p.relax;
  tf.bitwidth = options.bitwidth;
  tf.unwind = p.unwind;

  Var next = 0;
  tf.relax_vars.assign(p.relax.size(), 0);
  for (std::size_t i = 0; i < p.relax.size(); ++i)
    if (p.relax[i].shared()) {
      tf.relax_vars[i] = ++next;
      tf.health.add(p.relax[i].name, next);
    }
  const Lit truth = Lit::pos(++next);
  for (std::size_t i = 0; i < p.relax.size(); ++i)
    if (!p.relax[i].shared()) tf.relax_vars[i] = ++next;

  std::vector<Clause> clauses;
  BitBlaster bb(options.bitwidth, truth, [&] { return Lit::pos(++next); }, &clauses);
  tf.wcnf.hard.add_clause({truth});
  for (const Scope& scope : p.unrolled.scopes) {
    clauses.clear();
    bb.set_sink(&clauses);
    clauses.push_back({truth});
    ScopeCompiler(bb, p, tf.relax_vars, scope, options.unwinding_assumptions).run();
    formula::CnfFormula cnf;
    for (Clause& c : clauses) {
      if (!(c.size() == 1 && c[0] == truth)) tf.wcnf.hard.add_clause(c);
      cnf.add_clause(std::move(c));
    }
    tf.per_scope.push_back(std::move(cnf));
  }
  tf.wcnf.hard.ensure_vars(next);
  for (auto& cnf : tf.per_scope) cnf.ensure_vars(next);
  for (std::size_t i = 0; i < p.relax.size(); ++i)
    if (p.relax[i].shared())
      tf.wcnf.add_soft(Lit::pos(tf.relax_vars[i]), p.relax[i].weight);
  return tf;
}

TraceFormula build_trace_formula(const Program& p, const std::vector<TestCase>& failing,
                                 const PipelineOptions& o) {
  InstrumentedProgram ip = instrument_program(unroll_program(p, failing), o.unwind);
  assign_weights(ip.relax, o.weights, o.io_penalty);
  return compile_trace_formula(ip, {o.bitwidth, o.unwinding_assumptions});
}

void check_trace_formula(const TraceFormula& tf, const Program& p,
                         const std::vector<TestCase>& failing, const PipelineOptions& options) {
  if (formula::sat_solve(tf.wcnf.hard).sat()) return;
  PipelineOptions relaxed = options;
  relaxed.unwinding_assumptions = false;
  if (options.unwinding_assumptions &&
      formula::sat_solve(build_trace_formula(p, failing, relaxed).wcnf.hard).sat())
    throw UnwindInsufficientError("unwind-insufficient: a loop needs more than " +
                                  std::to_string(options.unwind) + " iterations");
  throw NoDiagnosisError("no set of statements explains the failing tests");
}

}  // namespace faultloc::minilang
