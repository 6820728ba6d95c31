// SPDX-License-Identifier: Apache-2.0
#include "faultloc/minilang/ast.hpp"

#include <sstream>

namespace faultloc::minilang {

std::string_view to_string(BinOp op) {
  switch (op) {
    case BinOp::kAdd: return "+";
    case BinOp::kSub: return "-";
    case BinOp::kLt: return "<";
    case BinOp::kLe: return "<=";
    case BinOp::kGt: return ">";
    case BinOp::kGe: return ">=";
    case BinOp::kEq: return "==";
    case BinOp::kNe: return "!=";
    case BinOp::kAnd: return "&&";
    case BinOp::kOr: return "||";
  }
  return "?";
}

Expr Expr::constant(std::int64_t v) {
  Expr e;
  e.kind = Kind::kConst;
  e.value = v;
  return e;
}

Expr Expr::var(std::string name) {
  Expr e;
  e.kind = Kind::kVar;
  e.name = std::move(name);
  return e;
}

Expr Expr::unary(UnOp op, Expr a) {
  Expr e;
  e.kind = Kind::kUnary;
  e.uop = op;
  e.args.push_back(std::move(a));
  return e;
}

Expr Expr::binary(BinOp op, Expr a, Expr b) {
  Expr e;
  e.kind = Kind::kBinary;
  e.bop = op;
  e.args.push_back(std::move(a));
  e.args.push_back(std::move(b));
  return e;
}

std::string render(const Expr& e) {
  switch (e.kind) {
    case Expr::Kind::kConst: return std::to_string(e.value);
    case Expr::Kind::kVar: return e.name;
    case Expr::Kind::kUnary:
      return std::string(e.uop == UnOp::kNeg ? "-" : "!") + "(" +
             render(e.args[0]) + ")";
    case Expr::Kind::kBinary:
      return "(" + render(e.args[0]) + " " + std::string(to_string(e.bop)) +
             " " + render(e.args[1]) + ")";
  }
  return "";
}

namespace {

void render_items(std::ostream& out, const std::vector<Stmt>& items) {
  for (std::size_t i = 0; i < items.size(); ++i)
    out << (i ? ", " : "") << items[i].target << " = " << render(*items[i].expr);
}

void render_block(std::ostream& out, const std::vector<Stmt>& stmts, int depth) {
  const std::string pad(static_cast<std::size_t>(depth) * 2, ' ');
  for (const Stmt& s : stmts) {
    out << pad;
    switch (s.kind) {
      case StmtKind::kDecl:
        out << "int " << s.target;
        if (s.expr) out << " = " << render(*s.expr);
        out << ";\n";
        break;
      case StmtKind::kAssign:
        out << s.target << " = " << render(*s.expr) << ";\n";
        break;
      case StmtKind::kRead:
        out << s.target << " = read();\n";
        break;
      case StmtKind::kPrint:
        out << "print(" << render(*s.expr) << ");\n";
        break;
      case StmtKind::kReturn:
        out << "return;\n";
        break;
      case StmtKind::kIf:
        out << "if (" << render(*s.expr) << ") {\n";
        render_block(out, s.body, depth + 1);
        if (!s.orelse.empty()) {
          out << pad << "} else {\n";
          render_block(out, s.orelse, depth + 1);
        }
        out << pad << "}\n";
        break;
      case StmtKind::kWhile:
        out << "while (" << render(*s.expr) << ") {\n";
        render_block(out, s.body, depth + 1);
        out << pad << "}\n";
        break;
      case StmtKind::kFor:
        out << "for (";
        render_items(out, s.init);
        out << "; " << (s.expr ? render(*s.expr) : "") << "; ";
        render_items(out, s.update);
        out << ") {\n";
        render_block(out, s.body, depth + 1);
        out << pad << "}\n";
        break;
    }
  }
}

}  // namespace

std::string render(const Program& p) {
  std::ostringstream out;
  render_block(out, p.globals, 0);
  out << "int main() {\n";
  render_block(out, p.body, 1);
  out << "}\n";
  return out.str();
}

}  // namespace faultloc::minilang
