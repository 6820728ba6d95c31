// SPDX-License-Identifier: Apache-2.0
#include "faultloc/formula/dimacs.hpp"

#include <cctype>
#include <charconv>
#include <limits>
#include <optional>
#include <sstream>

#include "faultloc/error.hpp"

namespace faultloc::formula {
namespace {

// Splits a line into whitespace-separated tokens.
std::vector<std::string_view> tokens_of(std::string_view line) {
  std::vector<std::string_view> out;
  std::size_t i = 0;
  while (i < line.size()) {
    while (i < line.size() && std::isspace(static_cast<unsigned char>(line[i])))
      ++i;
    std::size_t j = i;
    while (j < line.size() && !std::isspace(static_cast<unsigned char>(line[j])))
      ++j;
    if (j > i) out.push_back(line.substr(i, j - i));
    i = j;
  }
  return out;
}

std::int64_t to_int(std::string_view tok, int line_no) {
  std::int64_t v = 0;
  auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), v);
  if (ec != std::errc() || ptr != tok.data() + tok.size())
    throw ParseError("expected integer, got '" + std::string(tok) + "'",
                     line_no);
  return v;
}

template <typename Fn>
void for_each_line(std::string_view text, Fn&& fn) {
  int line_no = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    std::size_t nl = text.find('\n', pos);
    if (nl == std::string_view::npos) nl = text.size();
    ++line_no;
    std::string_view line = text.substr(pos, nl - pos);
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    fn(line, line_no);
    pos = nl + 1;
  }
}

Lit to_lit(std::int64_t d, int line_no) {
  if (d == 0 || d > std::numeric_limits<int>::max() / 2 ||
      d < -(std::numeric_limits<int>::max() / 2))
    throw ParseError("literal out of range", line_no);
  return Lit::from_dimacs(static_cast<int>(d));
}

}  // namespace

CnfFormula parse_dimacs_cnf(std::string_view text) {
  CnfFormula f;
  std::optional<int> declared_vars;
  Clause current;
  for_each_line(text, [&](std::string_view line, int line_no) {
    auto toks = tokens_of(line);
    if (toks.empty() || toks[0][0] == 'c' || toks[0][0] == '%') return;
    if (toks[0] == "p") {
      if (toks.size() != 4 || toks[1] != "cnf")
        throw ParseError("malformed problem line", line_no);
      declared_vars = static_cast<int>(to_int(toks[2], line_no));
      f.ensure_vars(*declared_vars);
      return;
    }
    for (auto tok : toks) {
      std::int64_t d = to_int(tok, line_no);
      if (d == 0) {
        f.add_clause(std::move(current));
        current.clear();
      } else {
        current.push_back(to_lit(d, line_no));
      }
    }
  });
  if (!current.empty()) f.add_clause(std::move(current));
  if (declared_vars && f.num_vars() > *declared_vars)
    throw FormulaError("clause mentions a variable beyond the header's " +
                       std::to_string(*declared_vars));
  return f;
}

std::string write_dimacs_cnf(const CnfFormula& f) {
  std::ostringstream os;
  os << "p cnf " << f.num_vars() << ' ' << f.size() << '\n';
  for (const Clause& c : f.clauses()) {
    for (Lit l : c) os << l.to_dimacs() << ' ';
    os << "0\n";
  }
  return os.str();
}

WcnfFormula parse_wcnf(std::string_view text) {
  WcnfFormula w;
  std::optional<std::int64_t> top;
  for_each_line(text, [&](std::string_view line, int line_no) {
    auto toks = tokens_of(line);
    if (toks.empty() || toks[0][0] == 'c') return;
    if (toks[0] == "p") {
      if (toks.size() < 4 || toks[1] != "wcnf")
        throw ParseError("malformed problem line", line_no);
      w.hard.ensure_vars(static_cast<int>(to_int(toks[2], line_no)));
      top = toks.size() >= 5 ? to_int(toks[4], line_no)
                             : std::numeric_limits<std::int64_t>::max();
      return;
    }
    if (toks.back() != "0")
      throw ParseError("clause must be terminated by 0", line_no);
    bool hard = false;
    std::int64_t weight = 0;
    if (toks[0] == "h") {
      hard = true;
    } else {
      weight = to_int(toks[0], line_no);
      if (weight < 1) throw ParseError("soft weight must be >= 1", line_no);
      if (top && weight >= *top) hard = true;
    }
    Clause c;
    for (std::size_t i = 1; i + 1 < toks.size(); ++i)
      c.push_back(to_lit(to_int(toks[i], line_no), line_no));
    if (hard)
      w.hard.add_clause(std::move(c));
    else
      w.add_soft(std::move(c), weight);
  });
  return w;
}

std::string write_wcnf(const WcnfFormula& w) {
  std::ostringstream os;
  for (const Clause& c : w.hard.clauses()) {
    os << 'h';
    for (Lit l : c) os << ' ' << l.to_dimacs();
    os << " 0\n";
  }
  for (const SoftClause& s : w.soft) {
    os << s.weight;
    for (Lit l : s.lits) os << ' ' << l.to_dimacs();
    os << " 0\n";
  }
  return os.str();
}

}  // namespace faultloc::formula
