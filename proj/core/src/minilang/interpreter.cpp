// SPDX-License-Identifier: Apache-2.0
#include "faultloc/minilang/interpreter.hpp"

#include "faultloc/error.hpp"

namespace faultloc::minilang {

std::int64_t wrap(std::int64_t v, int bitwidth) {
  if (bitwidth >= 64) return v;
  const std::uint64_t mask = (std::uint64_t{1} << bitwidth) - 1;
  std::uint64_t u = static_cast<std::uint64_t>(v) & mask;
  if (u >> (bitwidth - 1)) u |= ~mask;
  return static_cast<std::int64_t>(u);
}

std::int64_t evaluate(const Expr& e, const std::map<std::string, std::int64_t>& env,
                      int bitwidth) {
  switch (e.kind) {
    case Expr::Kind::kConst: return wrap(e.value, bitwidth);
    case Expr::Kind::kVar: {
      auto it = env.find(e.name);
      if (it == env.end()) throw PreconditionError("unbound variable " + e.name);
      return wrap(it->second, bitwidth);
    }
    case Expr::Kind::kUnary: {
      std::int64_t a = evaluate(e.args[0], env, bitwidth);
      return e.uop == UnOp::kNeg ? wrap(-a, bitwidth) : (a == 0 ? 1 : 0);
    }
    case Expr::Kind::kBinary: {
      std::int64_t a = evaluate(e.args[0], env, bitwidth);
      std::int64_t b = evaluate(e.args[1], env, bitwidth);
      switch (e.bop) {
        case BinOp::kAdd: return wrap(a + b, bitwidth);
        case BinOp::kSub: return wrap(a - b, bitwidth);
        case BinOp::kLt: return a < b;
        case BinOp::kLe: return a <= b;
        case BinOp::kGt: return a > b;
        case BinOp::kGe: return a >= b;
        case BinOp::kEq: return a == b;
        case BinOp::kNe: return a != b;
        case BinOp::kAnd: return a != 0 && b != 0;
        case BinOp::kOr: return a != 0 || b != 0;
      }
    }
  }
  return 0;
}

namespace {

struct StepLimit {};
struct Return {};

class Machine {
 public:
  Machine(const std::vector<std::int64_t>& inputs, int bitwidth, std::int64_t max_steps)
      : inputs_(inputs), bitwidth_(bitwidth), steps_left_(max_steps) {}

  void run(const std::vector<Stmt>& stmts) {
    for (const Stmt& s : stmts) exec(s);
  }

  std::vector<std::int64_t> outputs;

 private:
  void tick() {
    if (--steps_left_ < 0) throw StepLimit{};
  }
  std::int64_t eval(const Expr& e) { return evaluate(e, env_, bitwidth_); }
  bool cond(const Stmt& s) { return !s.expr || eval(*s.expr) != 0; }

  void exec(const Stmt& s) {
    tick();
    switch (s.kind) {
      case StmtKind::kDecl: env_[s.target] = s.expr ? eval(*s.expr) : 0; break;
      case StmtKind::kAssign: env_[s.target] = eval(*s.expr); break;
      case StmtKind::kRead:
        env_[s.target] = wrap(pos_ < inputs_.size() ? inputs_[pos_] : 0, bitwidth_);
        ++pos_;
        break;
      case StmtKind::kPrint: outputs.push_back(eval(*s.expr)); break;
      case StmtKind::kReturn: throw Return{};
      case StmtKind::kIf: run(cond(s) ? s.body : s.orelse); break;
      case StmtKind::kWhile:
        while (cond(s)) {
          tick();
          run(s.body);
        }
        break;
      case StmtKind::kFor:
        run(s.init);
        while (cond(s)) {
          tick();
          run(s.body);
          run(s.update);
        }
        break;
    }
  }

  const std::vector<std::int64_t>& inputs_;
  int bitwidth_;
  std::int64_t steps_left_;
  std::size_t pos_ = 0;
  std::map<std::string, std::int64_t> env_;
};

}  // namespace

RunResult run_program(const Program& p, const std::vector<std::int64_t>& inputs,
                      int bitwidth, std::int64_t max_steps) {
  Machine m(inputs, bitwidth, max_steps);
  RunResult r;
  try {
    m.run(p.globals);
    m.run(p.body);
  } catch (const Return&) {
  } catch (const StepLimit&) {
    r.terminated = false;
  }
  r.outputs = std::move(m.outputs);
  return r;
}

}  // namespace faultloc::minilang
