// SPDX-License-Identifier: Apache-2.0
#include "faultloc/minilang/parser.hpp"

#include <array>
#include <cctype>
#include <charconv>
#include <map>
#include <set>

#include "faultloc/error.hpp"

namespace faultloc::minilang {
namespace {

enum class Tok { kIdent, kInt, kPunct, kString, kEnd };

struct Token {
  Tok kind = Tok::kEnd;
  std::string text;
  int line = 0;
  int col = 0;
};

constexpr std::array<std::string_view, 16> kLongPunct = {
    "&&", "||", "==", "!=", "<=", ">=", "++", "--",
    "+=", "-=", "*=", "/=", "->", "<<", ">>", "%="};

const std::set<std::string, std::less<>> kUnsupportedKeywords = {
    "char",   "short",  "long",    "float",   "double", "unsigned",
    "signed", "struct", "union",   "enum",    "typedef", "do",
    "switch", "case",   "default", "break",   "continue", "goto",
    "sizeof", "const",  "static",  "bool",    "void"};

std::vector<Token> lex(std::string_view src) {
  std::vector<Token> out;
  int line = 1, col = 1;
  std::size_t i = 0;
  bool line_start = true;
  auto advance = [&](std::size_t n) {
    for (std::size_t k = 0; k < n && i < src.size(); ++k, ++i) {
      if (src[i] == '\n') {
        ++line;
        col = 1;
        line_start = true;
      } else {
        ++col;
      }
    }
  };
  while (i < src.size()) {
    char ch = src[i];
    if (std::isspace(static_cast<unsigned char>(ch))) {
      advance(1);
      continue;
    }
    if (ch == '#' && line_start) {  // preprocessor line
      while (i < src.size() && src[i] != '\n') advance(1);
      continue;
    }
    line_start = false;
    if (src.substr(i, 2) == "//") {
      while (i < src.size() && src[i] != '\n') advance(1);
      continue;
    }
    if (src.substr(i, 2) == "/*") {
      int l = line, c = col;
      std::size_t end = src.find("*/", i + 2);
      if (end == std::string_view::npos) throw ParseError("unterminated comment", l, c);
      bool saved = line_start;
      advance(end + 2 - i);
      line_start = saved;
      continue;
    }
    Token t;
    t.line = line;
    t.col = col;
    if (std::isalpha(static_cast<unsigned char>(ch)) || ch == '_') {
      std::size_t j = i;
      while (j < src.size() &&
             (std::isalnum(static_cast<unsigned char>(src[j])) || src[j] == '_'))
        ++j;
      t.kind = Tok::kIdent;
      t.text = std::string(src.substr(i, j - i));
      advance(j - i);
    } else if (std::isdigit(static_cast<unsigned char>(ch))) {
      std::size_t j = i;
      while (j < src.size() && std::isalnum(static_cast<unsigned char>(src[j]))) ++j;
      t.kind = Tok::kInt;
      t.text = std::string(src.substr(i, j - i));
      advance(j - i);
    } else if (ch == '"' || ch == '\'') {
      std::size_t j = i + 1;
      while (j < src.size() && src[j] != ch && src[j] != '\n')
        j += src[j] == '\\' ? 2 : 1;
      t.kind = Tok::kString;
      t.text = std::string(src.substr(i, std::min(j + 1, src.size()) - i));
      advance(j + 1 - i);
    } else {
      t.kind = Tok::kPunct;
      t.text = std::string(1, ch);
      for (std::string_view p : kLongPunct)
        if (src.substr(i, 2) == p) t.text = std::string(p);
      advance(t.text.size());
    }
    out.push_back(std::move(t));
  }
  Token end;
  end.line = line;
  end.col = col;
  out.push_back(end);
  return out;
}

class Parser {
 public:
  explicit Parser(std::vector<Token> toks) : toks_(std::move(toks)) {}

  Program parse() {
    Program p;
    scopes_.emplace_back();
    if (has_main()) {
      while (!(is("int") && peek(1).text == "main")) {
        if (!is("int")) error_here("expected a global 'int' declaration or main");
        parse_decl(p.globals);
      }
      expect("int");
      expect("main");
      expect("(");
      if (is("void")) next();
      expect(")");
      if (!is("{")) error_here("expected '{'");
      parse_stmt(p.body);
      if (cur().kind != Tok::kEnd)
        error_here("unexpected '" + cur().text + "' after main");
    } else {
      scopes_.emplace_back();
      while (cur().kind != Tok::kEnd) parse_stmt(p.body);
    }
    int next_id = 1;
    number(p.globals, next_id);
    number(p.body, next_id);
    p.num_statements = next_id - 1;
    p.source_names = std::move(source_names_);
    return p;
  }

 private:
  const Token& cur() const { return toks_[pos_]; }
  const Token& peek(std::size_t k) const {
    return toks_[std::min(pos_ + k, toks_.size() - 1)];
  }
  bool is(std::string_view text) const {
    return cur().kind != Tok::kString && cur().kind != Tok::kEnd && cur().text == text;
  }
  Token next() { return toks_[pos_ < toks_.size() - 1 ? pos_++ : pos_]; }

  [[noreturn]] void error_at(const Token& t, const std::string& msg) const {
    throw ParseError(msg, t.line, t.col);
  }
  [[noreturn]] void error_here(const std::string& msg) const { error_at(cur(), msg); }
  [[noreturn]] void unsupported(const Token& t, const std::string& what) const {
    error_at(t, "unsupported construct: " + what);
  }

  void expect(std::string_view text) {
    if (!is(text))
      error_here("expected '" + std::string(text) + "' but found '" +
                 (cur().kind == Tok::kEnd ? std::string("end of input") : cur().text) + "'");
    next();
  }

  bool has_main() const {
    for (std::size_t i = 1; i + 1 < toks_.size(); ++i)
      if (toks_[i].kind == Tok::kIdent && toks_[i].text == "main" &&
          toks_[i + 1].text == "(" && toks_[i - 1].text == "int")
        return true;
    return false;
  }

  std::string declare(const Token& t) {
    if (t.kind != Tok::kIdent) error_at(t, "expected a variable name");
    check_not_keyword(t);
    auto& scope = scopes_.back();
    if (scope.count(t.text)) error_at(t, "redeclaration of '" + t.text + "'");
    int& n = uses_[t.text];
    std::string unique = ++n == 1 ? t.text : t.text + "." + std::to_string(n);
    scope[t.text] = unique;
    source_names_.emplace_back(unique, t.text);
    return unique;
  }

  std::string lookup(const Token& t) const {
    for (auto it = scopes_.rbegin(); it != scopes_.rend(); ++it)
      if (auto f = it->find(t.text); f != it->end()) return f->second;
    error_at(t, "use of undeclared variable '" + t.text + "'");
  }

  void check_not_keyword(const Token& t) const {
    static const std::set<std::string, std::less<>> reserved = {
        "int", "if", "else", "while", "for", "return", "read", "print", "main"};
    if (kUnsupportedKeywords.count(t.text)) unsupported(t, "'" + t.text + "'");
    if (reserved.count(t.text)) error_at(t, "unexpected keyword '" + t.text + "'");
  }

  // int a, b = e;  -> one kDecl per declarator
  void parse_decl(std::vector<Stmt>& out) {
    next();  // int
    for (;;) {
      Token name = next();
      if (is("[")) unsupported(cur(), "arrays");
      if (name.text == "*") unsupported(name, "pointers");
      Stmt s;
      s.kind = StmtKind::kDecl;
      s.line = name.line;
      std::optional<Expr> init;
      if (is("=")) {
        next();
        if (is("read")) unsupported(cur(), "read() in a declaration; use `x = read();`");
        init = parse_expr();
      }
      s.target = declare(name);  // initializer sees the outer binding
      s.expr = std::move(init);
      out.push_back(std::move(s));
      if (is(",")) {
        next();
        continue;
      }
      expect(";");
      break;
    }
  }

  Stmt assign(int line, std::string target, Expr rhs) {
    Stmt s;
    s.kind = StmtKind::kAssign;
    s.line = line;
    s.target = std::move(target);
    s.expr = std::move(rhs);
    return s;
  }

  // x = e | x += e | x -= e | x++ | x-- | ++x | --x
  Stmt parse_assign_item() {
    Token first = cur();
    if (is("++") || is("--")) {
      next();
      Token name = next();
      std::string v = lookup(name);
      BinOp op = first.text == "++" ? BinOp::kAdd : BinOp::kSub;
      return assign(first.line, v, Expr::binary(op, Expr::var(v), Expr::constant(1)));
    }
    if (first.kind != Tok::kIdent) error_here("expected an assignment");
    check_not_keyword(first);
    next();
    if (is("(")) unsupported(first, "function call '" + first.text + "'");
    if (is("[")) unsupported(cur(), "arrays");
    Token op = next();
    // The target is resolved after the right-hand side so that unsupported
    // constructs there are reported first.
    auto v_of = [&] { return lookup(first); };
    if (op.text == "++" || op.text == "--") {
      std::string v = v_of();
      return assign(first.line, v,
                    Expr::binary(op.text == "++" ? BinOp::kAdd : BinOp::kSub,
                                 Expr::var(v), Expr::constant(1)));
    }
    if (op.text == "+=" || op.text == "-=") {
      Expr rhs = parse_expr();
      std::string v = v_of();
      return assign(first.line, v,
                    Expr::binary(op.text == "+=" ? BinOp::kAdd : BinOp::kSub,
                                 Expr::var(v), std::move(rhs)));
    }
    if (op.text == "*=" || op.text == "/=" || op.text == "%=")
      unsupported(op, "operator '" + op.text + "'");
    if (op.text != "=") error_at(op, "expected '=' after '" + first.text + "'");
    if (is("read")) {
      next();
      expect("(");
      expect(")");
      Stmt s;
      s.kind = StmtKind::kRead;
      s.line = first.line;
      s.target = v_of();
      return s;
    }
    Expr rhs = parse_expr();
    return assign(first.line, v_of(), std::move(rhs));
  }

  std::vector<Stmt> parse_items() {
    std::vector<Stmt> items;
    for (;;) {
      items.push_back(parse_assign_item());
      if (!is(",")) break;
      next();
    }
    return items;
  }

  std::vector<Stmt> parse_branch() {
    std::vector<Stmt> out;
    scopes_.emplace_back();
    parse_stmt(out);
    scopes_.pop_back();
    return out;
  }

  void parse_stmt(std::vector<Stmt>& out) {
    const Token t = cur();
    if (t.kind == Tok::kEnd) error_here("unexpected end of input");
    if (t.kind == Tok::kString) unsupported(t, "string literal");
    if (is(";")) {
      next();
      return;
    }
    if (is("{")) {
      next();
      scopes_.emplace_back();
      while (!is("}")) {
        if (cur().kind == Tok::kEnd) error_here("missing '}'");
        parse_stmt(out);
      }
      next();
      scopes_.pop_back();
      return;
    }
    if (is("int")) {
      parse_decl(out);
      return;
    }
    if (is("*") || is("&")) unsupported(t, "pointers");
    if (t.kind == Tok::kIdent && kUnsupportedKeywords.count(t.text))
      unsupported(t, "'" + t.text + "'");
    Stmt s;
    s.line = t.line;
    if (is("if")) {
      next();
      expect("(");
      s.kind = StmtKind::kIf;
      s.expr = parse_expr();
      expect(")");
      s.body = parse_branch();
      if (is("else")) {
        next();
        s.orelse = parse_branch();
      }
    } else if (is("while")) {
      next();
      expect("(");
      s.kind = StmtKind::kWhile;
      s.expr = parse_expr();
      expect(")");
      s.body = parse_branch();
    } else if (is("for")) {
      next();
      expect("(");
      s.kind = StmtKind::kFor;
      scopes_.emplace_back();
      if (is("int")) {
        std::vector<Stmt> decls;
        parse_decl(decls);
        for (Stmt& d : decls) {
          if (!d.expr) error_at(t, "for-loop declaration needs an initializer");
          s.init.push_back(assign(d.line, d.target, std::move(*d.expr)));
        }
      } else {
        if (!is(";")) s.init = parse_items();
        expect(";");
      }
      if (!is(";")) s.expr = parse_expr();
      expect(";");
      if (!is(")")) s.update = parse_items();
      expect(")");
      s.body = parse_branch();
      scopes_.pop_back();
    } else if (is("return")) {
      next();
      s.kind = StmtKind::kReturn;
      if (!is(";")) s.expr = parse_expr();
      expect(";");
    } else if (is("print")) {
      next();
      expect("(");
      s.kind = StmtKind::kPrint;
      s.expr = parse_expr();
      expect(")");
      expect(";");
    } else if (is("else")) {
      error_here("'else' without 'if'");
    } else {
      s = parse_assign_item();
      expect(";");
    }
    out.push_back(std::move(s));
  }

  // Precedence climbing: || < && < ==,!= < relational < +,- < unary.
  Expr parse_expr() {
    Expr e = parse_binary(0);
    if (is("?")) unsupported(cur(), "conditional operator");
    if (is("=")) unsupported(cur(), "assignment inside an expression");
    return e;
  }

  static int precedence(const std::string& op) {
    if (op == "||") return 1;
    if (op == "&&") return 2;
    if (op == "==" || op == "!=") return 3;
    if (op == "<" || op == "<=" || op == ">" || op == ">=") return 4;
    if (op == "+" || op == "-") return 5;
    return 0;
  }

  static BinOp binop(const std::string& op) {
    static const std::map<std::string, BinOp> ops = {
        {"||", BinOp::kOr}, {"&&", BinOp::kAnd}, {"==", BinOp::kEq},
        {"!=", BinOp::kNe}, {"<", BinOp::kLt},   {"<=", BinOp::kLe},
        {">", BinOp::kGt},  {">=", BinOp::kGe},  {"+", BinOp::kAdd},
        {"-", BinOp::kSub}};
    return ops.at(op);
  }

  Expr parse_binary(int min_prec) {
    Expr lhs = parse_unary();
    for (;;) {
      const Token& op = cur();
      if (op.kind != Tok::kPunct) break;
      if (op.text == "*" || op.text == "/" || op.text == "%" || op.text == "&" ||
          op.text == "|" || op.text == "^" || op.text == "<<" || op.text == ">>")
        unsupported(op, "operator '" + op.text + "'");
      int prec = precedence(op.text);
      if (prec == 0 || prec <= min_prec) break;
      std::string text = next().text;
      Expr rhs = parse_binary(prec);
      lhs = Expr::binary(binop(text), std::move(lhs), std::move(rhs));
    }
    return lhs;
  }

  Expr parse_unary() {
    const Token t = cur();
    if (is("-")) {
      next();
      return Expr::unary(UnOp::kNeg, parse_unary());
    }
    if (is("+")) {
      next();
      return parse_unary();
    }
    if (is("!")) {
      next();
      return Expr::unary(UnOp::kNot, parse_unary());
    }
    if (is("*") || is("&")) unsupported(t, "pointers");
    if (is("~")) unsupported(t, "operator '~'");
    if (is("++") || is("--")) unsupported(t, "increment inside an expression");
    return parse_primary();
  }

  Expr parse_primary() {
    const Token t = next();
    switch (t.kind) {
      case Tok::kInt: {
        std::int64_t v = 0;
        auto [p, ec] = std::from_chars(t.text.data(), t.text.data() + t.text.size(), v);
        if (ec != std::errc() || p != t.text.data() + t.text.size())
          error_at(t, "invalid integer literal '" + t.text + "'");
        return Expr::constant(v);
      }
      case Tok::kIdent: {
        if (t.text == "read")
          unsupported(t, "read() inside an expression; use `x = read();`");
        if (kUnsupportedKeywords.count(t.text)) unsupported(t, "'" + t.text + "'");
        if (is("(")) unsupported(t, "function call '" + t.text + "'");
        if (is("[")) unsupported(cur(), "arrays");
        if (is("++") || is("--")) unsupported(cur(), "increment inside an expression");
        if (is("->") || is(".")) unsupported(cur(), "member access");
        check_not_keyword(t);
        return Expr::var(lookup(t));
      }
      case Tok::kString: unsupported(t, "string literal");
      case Tok::kEnd: error_at(t, "unexpected end of input");
      case Tok::kPunct:
        if (t.text == "(") {
          Expr e = parse_binary(0);
          expect(")");
          return e;
        }
        error_at(t, "unexpected '" + t.text + "'");
    }
    error_at(t, "unexpected token");
  }

  static void number(std::vector<Stmt>& stmts, int& next_id) {
    for (Stmt& s : stmts) {
      s.id = next_id++;
      number(s.init, next_id);
      number(s.update, next_id);
      number(s.body, next_id);
      number(s.orelse, next_id);
    }
  }

  std::vector<Token> toks_;
  std::size_t pos_ = 0;
  std::vector<std::map<std::string, std::string>> scopes_;
  std::map<std::string, int> uses_;
  std::vector<std::pair<std::string, std::string>> source_names_;
};

}  // namespace

Program parse_program(std::string_view text) { return Parser(lex(text)).parse(); }

}  // namespace faultloc::minilang
