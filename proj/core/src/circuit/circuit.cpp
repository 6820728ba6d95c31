// SPDX-License-Identifier: Apache-2.0
#include "faultloc/circuit/circuit.hpp"

#include <algorithm>
#include <cctype>
#include <map>
#include <queue>
#include <sstream>
#include <unordered_map>

#include "faultloc/error.hpp"

namespace faultloc::circuit {
namespace {

constexpr std::pair<GateKind, std::string_view> kNames[] = {
    {GateKind::kAnd, "AND"}, {GateKind::kNand, "NAND"},
    {GateKind::kOr, "OR"},   {GateKind::kNor, "NOR"},
    {GateKind::kNot, "NOT"}, {GateKind::kXor, "XOR"},
    {GateKind::kXnor, "XNOR"}, {GateKind::kBuff, "BUFF"},
};

std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front())))
    s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back())))
    s.remove_suffix(1);
  return s;
}

bool valid_name(std::string_view s) {
  if (s.empty()) return false;
  return std::all_of(s.begin(), s.end(), [](char ch) {
    return std::isalnum(static_cast<unsigned char>(ch)) || ch == '_' ||
           ch == '.' || ch == '[' || ch == ']' || ch == '$';
  });
}

struct RawGate {
  Gate gate;
  int line;
};

}  // namespace

std::string_view to_string(GateKind kind) {
  for (const auto& [k, n] : kNames)
    if (k == kind) return n;
  return "?";
}

std::optional<GateKind> parse_gate_kind(std::string_view name) {
  std::string up(name);
  for (char& ch : up) ch = static_cast<char>(std::toupper(static_cast<unsigned char>(ch)));
  if (up == "BUF") return GateKind::kBuff;
  for (const auto& [k, n] : kNames)
    if (n == up) return k;
  return std::nullopt;
}

bool is_unary(GateKind kind) {
  return kind == GateKind::kNot || kind == GateKind::kBuff;
}

bool eval_gate(GateKind kind, const std::vector<bool>& in) {
  auto all = [&] { return std::all_of(in.begin(), in.end(), [](bool b) { return b; }); };
  auto any = [&] { return std::any_of(in.begin(), in.end(), [](bool b) { return b; }); };
  auto parity = [&] {
    return static_cast<bool>(std::count(in.begin(), in.end(), true) % 2);
  };
  switch (kind) {
    case GateKind::kAnd: return all();
    case GateKind::kNand: return !all();
    case GateKind::kOr: return any();
    case GateKind::kNor: return !any();
    case GateKind::kNot: return !in[0];
    case GateKind::kBuff: return in[0];
    case GateKind::kXor: return parity();
    case GateKind::kXnor: return !parity();
  }
  return false;
}

int Circuit::gate_index(std::string_view id) const {
  for (std::size_t i = 0; i < gates.size(); ++i)
    if (gates[i].id == id) return static_cast<int>(i);
  return -1;
}

Circuit parse_bench(std::string_view text, std::string name) {
  Circuit c;
  c.name = std::move(name);
  std::vector<RawGate> raw;
  std::map<std::string, int> defined_at;  // signal -> line
  std::vector<std::pair<std::string, int>> outputs;

  int lineno = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    std::size_t nl = text.find('\n', pos);
    if (nl == std::string_view::npos) nl = text.size();
    std::string_view line = text.substr(pos, nl - pos);
    pos = nl + 1;
    ++lineno;
    if (auto hash = line.find('#'); hash != std::string_view::npos)
      line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;

    auto define = [&](const std::string& sig) {
      if (!valid_name(sig)) throw ParseError("invalid signal name '" + sig + "'", lineno);
      auto [it, fresh] = defined_at.emplace(sig, lineno);
      if (!fresh)
        throw ParseError("duplicate definition of '" + sig + "' (first on line " +
                             std::to_string(it->second) + ")",
                         lineno);
    };

    std::size_t eq = line.find('=');
    std::size_t open = line.find('(');
    std::size_t close = line.rfind(')');
    if (open == std::string_view::npos || close == std::string_view::npos ||
        close < open || !trim(line.substr(close + 1)).empty())
      throw ParseError("expected NAME(...) or signal = GATE(...)", lineno);

    if (eq == std::string_view::npos || eq > open) {
      std::string kw(trim(line.substr(0, open)));
      std::string arg(trim(line.substr(open + 1, close - open - 1)));
      for (char& ch : kw) ch = static_cast<char>(std::toupper(static_cast<unsigned char>(ch)));
      if (kw == "INPUT") {
        define(arg);
        c.inputs.push_back(arg);
      } else if (kw == "OUTPUT") {
        if (!valid_name(arg)) throw ParseError("invalid signal name '" + arg + "'", lineno);
        outputs.emplace_back(arg, lineno);
      } else {
        throw ParseError("unknown declaration '" + kw + "'", lineno);
      }
      continue;
    }

    RawGate g;
    g.line = lineno;
    g.gate.id = std::string(trim(line.substr(0, eq)));
    std::string_view kind = trim(line.substr(eq + 1, open - eq - 1));
    auto k = parse_gate_kind(kind);
    if (!k) throw ParseError("unknown gate kind '" + std::string(kind) + "'", lineno);
    g.gate.kind = *k;
    std::string_view args = line.substr(open + 1, close - open - 1);
    std::size_t start = 0;
    while (start <= args.size()) {
      std::size_t comma = args.find(',', start);
      if (comma == std::string_view::npos) comma = args.size();
      std::string a(trim(args.substr(start, comma - start)));
      if (!valid_name(a)) throw ParseError("invalid fanin '" + a + "'", lineno);
      g.gate.fanin.push_back(std::move(a));
      start = comma + 1;
    }
    std::size_t n = g.gate.fanin.size();
    if (is_unary(*k) ? n != 1 : n < 2)
      throw ParseError(std::string(to_string(*k)) + " gate '" + g.gate.id +
                           "' has " + std::to_string(n) + " inputs",
                       lineno);
    define(g.gate.id);
    raw.push_back(std::move(g));
  }

  for (const auto& [sig, line] : outputs) {
    if (!defined_at.count(sig))
      throw ParseError("output '" + sig + "' is never defined", line);
    c.outputs.push_back(sig);
  }
  for (const RawGate& g : raw)
    for (const std::string& a : g.gate.fanin)
      if (!defined_at.count(a))
        throw ParseError("undefined signal '" + a + "'", g.line);

  // Kahn's algorithm, preferring file order among ready gates.
  std::unordered_map<std::string, std::size_t> gate_of;
  for (std::size_t i = 0; i < raw.size(); ++i) gate_of[raw[i].gate.id] = i;
  std::vector<int> pending(raw.size(), 0);
  std::vector<std::vector<std::size_t>> users(raw.size());
  for (std::size_t i = 0; i < raw.size(); ++i)
    for (const std::string& a : raw[i].gate.fanin)
      if (auto it = gate_of.find(a); it != gate_of.end()) {
        ++pending[i];
        users[it->second].push_back(i);
      }
  std::priority_queue<std::size_t, std::vector<std::size_t>, std::greater<>> ready;
  for (std::size_t i = 0; i < raw.size(); ++i)
    if (pending[i] == 0) ready.push(i);
  std::vector<bool> done(raw.size(), false);
  while (!ready.empty()) {
    std::size_t i = ready.top();
    ready.pop();
    done[i] = true;
    c.gates.push_back(raw[i].gate);
    for (std::size_t u : users[i])
      if (--pending[u] == 0) ready.push(u);
  }
  if (c.gates.size() != raw.size()) {
    for (std::size_t i = 0; i < raw.size(); ++i)
      if (!done[i])
        throw ParseError("combinational cycle through '" + raw[i].gate.id + "'",
                         raw[i].line);
  }
  return c;
}

std::string render_bench(const Circuit& c) {
  std::ostringstream out;
  if (!c.name.empty()) out << "# " << c.name << "\n";
  for (const auto& i : c.inputs) out << "INPUT(" << i << ")\n";
  for (const auto& o : c.outputs) out << "OUTPUT(" << o << ")\n";
  for (const Gate& g : c.gates) {
    out << g.id << " = " << to_string(g.kind) << "(";
    for (std::size_t k = 0; k < g.fanin.size(); ++k)
      out << (k ? ", " : "") << g.fanin[k];
    out << ")\n";
  }
  return out.str();
}

std::vector<bool> simulate(const Circuit& c, const std::vector<bool>& inputs) {
  if (inputs.size() != c.inputs.size())
    throw PreconditionError("simulate: expected " + std::to_string(c.inputs.size()) +
                            " input bits, got " + std::to_string(inputs.size()));
  std::unordered_map<std::string, bool> value;
  for (std::size_t i = 0; i < inputs.size(); ++i) value[c.inputs[i]] = inputs[i];
  std::vector<bool> fanin;
  for (const Gate& g : c.gates) {
    fanin.clear();
    for (const std::string& a : g.fanin) fanin.push_back(value.at(a));
    value[g.id] = eval_gate(g.kind, fanin);
  }
  std::vector<bool> out;
  for (const std::string& o : c.outputs) out.push_back(value.at(o));
  return out;
}

}  // namespace faultloc::circuit
