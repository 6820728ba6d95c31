// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace faultloc::circuit {

enum class GateKind { kAnd, kNand, kOr, kNor, kNot, kXor, kXnor, kBuff };

std::string_view to_string(GateKind kind);
/// Case-insensitive; accepts BUF as an alias of BUFF.
std::optional<GateKind> parse_gate_kind(std::string_view name);
bool is_unary(GateKind kind);
bool eval_gate(GateKind kind, const std::vector<bool>& fanin);

struct Gate {
  std::string id;
  GateKind kind = GateKind::kAnd;
  std::vector<std::string> fanin;

  friend bool operator==(const Gate&, const Gate&) = default;
};

/// Combinational netlist. Gates are stored in topological order.
struct Circuit {
  std::string name;
  std::vector<std::string> inputs;
  std::vector<std::string> outputs;
  std::vector<Gate> gates;

  /// Index of a gate by output signal, or -1.
  int gate_index(std::string_view id) const;

  friend bool operator==(const Circuit&, const Circuit&) = default;
};

/// Parses ISCAS85 BENCH text. Throws ParseError on syntax errors, cycles,
/// undefined or duplicate signals, unknown gate kinds and bad arities.
Circuit parse_bench(std::string_view text, std::string name = "");

/// Renders BENCH text: inputs, outputs, then gates in stored order.
std::string render_bench(const Circuit& c);

/// Evaluates the circuit. Throws PreconditionError on an arity mismatch.
std::vector<bool> simulate(const Circuit& c, const std::vector<bool>& inputs);

}  // namespace faultloc::circuit
