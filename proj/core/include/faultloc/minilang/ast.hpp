// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace faultloc::minilang {

enum class BinOp { kAdd, kSub, kLt, kLe, kGt, kGe, kEq, kNe, kAnd, kOr };
enum class UnOp { kNeg, kNot };

std::string_view to_string(BinOp op);

struct Expr {
  enum class Kind { kConst, kVar, kUnary, kBinary };

  Kind kind = Kind::kConst;
  std::int64_t value = 0;  // kConst
  std::string name;        // kVar
  UnOp uop = UnOp::kNeg;
  BinOp bop = BinOp::kAdd;
  std::vector<Expr> args;

  static Expr constant(std::int64_t v);
  static Expr var(std::string name);
  static Expr unary(UnOp op, Expr e);
  static Expr binary(BinOp op, Expr a, Expr b);

  friend bool operator==(const Expr&, const Expr&) = default;
};

enum class StmtKind {
  kDecl,    // int x;  int x = e;
  kAssign,  // x = e;  (also x += e, x++, ... after desugaring)
  kRead,    // x = read();
  kPrint,   // print(e);
  kIf,
  kWhile,
  kFor,
  kReturn,
};

/// A statement. `id` is unique within a program (pre-order, from 1) and
/// `line` is the 1-based source line of its first token.
struct Stmt {
  StmtKind kind = StmtKind::kAssign;
  int id = 0;
  int line = 0;
  std::string target;        // kDecl, kAssign, kRead
  std::optional<Expr> expr;  // initializer, rhs, print argument, condition
  std::vector<Stmt> body;    // then-branch, loop body
  std::vector<Stmt> orelse;  // else-branch
  std::vector<Stmt> init;    // for-loop expression lists (kAssign items)
  std::vector<Stmt> update;

  bool is_io() const { return kind == StmtKind::kRead || kind == StmtKind::kPrint; }
  /// Statements that get a guard relaxation variable.
  bool is_simple() const {
    return kind == StmtKind::kAssign || kind == StmtKind::kRead ||
           kind == StmtKind::kPrint || (kind == StmtKind::kDecl && expr);
  }

  friend bool operator==(const Stmt&, const Stmt&) = default;
};

struct Program {
  std::vector<Stmt> globals;  // kDecl only
  std::vector<Stmt> body;     // main
  int num_statements = 0;
  /// Unique variable name -> name as written in the source.
  std::vector<std::pair<std::string, std::string>> source_names;
};

/// Renders C-like source. Line structure is not preserved.
std::string render(const Expr& e);
std::string render(const Program& p);

/// Applies `fn` to every statement in pre-order, including for-loop
/// expression-list items.
template <class Fn>
void for_each_stmt(const std::vector<Stmt>& stmts, Fn&& fn) {
  for (const Stmt& s : stmts) {
    fn(s);
    for_each_stmt(s.init, fn);
    for_each_stmt(s.update, fn);
    for_each_stmt(s.body, fn);
    for_each_stmt(s.orelse, fn);
  }
}

}  // namespace faultloc::minilang
