// SPDX-License-Identifier: Apache-2.0
#include "faultloc/circuit/faults.hpp"

#include <algorithm>
#include <limits>
#include <set>

#include <nlohmann/json.hpp>

#include "faultloc/error.hpp"

namespace faultloc::circuit {
namespace {

constexpr GateKind kMultiInput[] = {GateKind::kAnd, GateKind::kNand,
                                    GateKind::kOr,  GateKind::kNor,
                                    GateKind::kXor, GateKind::kXnor};

std::vector<bool> from_bits(const std::string& s, const char* what) {
  std::vector<bool> out;
  for (char ch : s) {
    if (ch != '0' && ch != '1')
      throw ParseError(std::string("observation '") + what +
                       "' must be a string of 0/1 characters");
    out.push_back(ch == '1');
  }
  return out;
}

}  // namespace

std::uint64_t uniform_index(std::mt19937_64& rng, std::uint64_t n) {
  const std::uint64_t max = std::numeric_limits<std::uint64_t>::max();
  const std::uint64_t limit = max - max % n;
  std::uint64_t x;
  do {
    x = rng();
  } while (x >= limit);
  return x % n;
}

FaultyCircuit inject_faults(const Circuit& c, int n, std::uint64_t seed) {
  if (n < 1 || static_cast<std::size_t>(n) > c.gates.size())
    throw PreconditionError("inject_faults: fault count " + std::to_string(n) +
                            " outside [1, " + std::to_string(c.gates.size()) +
                            "]");
  std::mt19937_64 rng(seed);
  std::vector<std::size_t> idx(c.gates.size());
  for (std::size_t i = 0; i < idx.size(); ++i) idx[i] = i;
  for (std::size_t i = 0; i < static_cast<std::size_t>(n); ++i)
    std::swap(idx[i], idx[i + uniform_index(rng, idx.size() - i)]);

  std::vector<std::pair<std::size_t, GateKind>> picks;
  for (std::size_t i = 0; i < static_cast<std::size_t>(n); ++i) {
    GateKind from = c.gates[idx[i]].kind;
    GateKind to;
    if (from == GateKind::kNot) {
      to = GateKind::kBuff;
    } else if (from == GateKind::kBuff) {
      to = GateKind::kNot;
    } else {
      std::vector<GateKind> others;
      for (GateKind k : kMultiInput)
        if (k != from) others.push_back(k);
      to = others[uniform_index(rng, others.size())];
    }
    picks.emplace_back(idx[i], to);
  }
  std::sort(picks.begin(), picks.end(),
            [](const auto& a, const auto& b) { return a.first < b.first; });

  FaultyCircuit out{c, {}};
  for (const auto& [i, to] : picks) {
    out.faults.push_back({c.gates[i].id, c.gates[i].kind, to});
    out.circuit.gates[i].kind = to;
  }
  return out;
}

std::vector<CircuitObservation> generate_observations(
    const Circuit& golden, const Circuit& faulty, std::size_t count,
    std::uint64_t seed, std::size_t max_draws) {
  if (golden.inputs.size() != faulty.inputs.size() ||
      golden.outputs.size() != faulty.outputs.size())
    throw PreconditionError("generate_observations: interfaces differ");
  const std::size_t width = golden.inputs.size();
  // Saturation only matters for small input spaces.
  const std::uint64_t space =
      width < 63 ? (std::uint64_t{1} << width) : std::numeric_limits<std::uint64_t>::max();

  std::mt19937_64 rng(seed);
  std::set<std::vector<bool>> seen;
  std::vector<CircuitObservation> out;
  for (std::size_t draw = 0;
       draw < max_draws && out.size() < count && seen.size() < space; ++draw) {
    std::vector<bool> in(width);
    for (std::size_t b = 0; b < width; ++b) in[b] = uniform_index(rng, 2) == 1;
    if (!seen.insert(in).second) continue;
    std::vector<bool> expect = simulate(golden, in);
    if (simulate(faulty, in) != expect) out.push_back({std::move(in), std::move(expect)});
  }
  return out;
}

Circuit random_circuit(int inputs, int gates, int outputs, std::uint64_t seed) {
  if (inputs < 1 || gates < outputs || outputs < 1)
    throw PreconditionError("random_circuit: bad shape");
  std::mt19937_64 rng(seed);
  Circuit c;
  c.name = "random" + std::to_string(seed);
  std::vector<std::string> signals;
  for (int i = 0; i < inputs; ++i) {
    c.inputs.push_back("i" + std::to_string(i));
    signals.push_back(c.inputs.back());
  }
  for (int g = 0; g < gates; ++g) {
    Gate gate;
    gate.id = "g" + std::to_string(g);
    std::uint64_t k = uniform_index(rng, 8);
    if (k < 6) {
      gate.kind = kMultiInput[k];
      std::size_t arity = 2 + uniform_index(rng, 2);
      for (std::size_t a = 0; a < arity; ++a)
        gate.fanin.push_back(signals[uniform_index(rng, signals.size())]);
    } else {
      gate.kind = k == 6 ? GateKind::kNot : GateKind::kBuff;
      gate.fanin.push_back(signals[uniform_index(rng, signals.size())]);
    }
    signals.push_back(gate.id);
    c.gates.push_back(std::move(gate));
  }
  for (int o = gates - outputs; o < gates; ++o)
    c.outputs.push_back("g" + std::to_string(o));
  return c;
}

std::string to_bits(const std::vector<bool>& bits) {
  std::string s;
  for (bool b : bits) s.push_back(b ? '1' : '0');
  return s;
}

std::string observations_to_json(const std::vector<CircuitObservation>& obs) {
  nlohmann::json arr = nlohmann::json::array();
  for (const auto& o : obs)
    arr.push_back({{"in", to_bits(o.inputs)}, {"out", to_bits(o.outputs)}});
  return nlohmann::json{{"observations", arr}}.dump(2) + "\n";
}

std::vector<CircuitObservation> parse_observations(std::string_view text,
                                                   const Circuit& c) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw ParseError(std::string("observations: ") + e.what());
  }
  if (!j.is_object() || !j.contains("observations") ||
      !j["observations"].is_array())
    throw ParseError("observations: expected {\"observations\": [...]}");
  std::vector<CircuitObservation> out;
  for (const auto& o : j["observations"]) {
    if (!o.is_object() || !o.contains("in") || !o.contains("out") ||
        !o["in"].is_string() || !o["out"].is_string())
      throw ParseError("observations: each entry needs string fields in/out");
    CircuitObservation ob{from_bits(o["in"], "in"), from_bits(o["out"], "out")};
    if (ob.inputs.size() != c.inputs.size() ||
        ob.outputs.size() != c.outputs.size())
      throw PreconditionError("observation width does not match circuit " +
                              c.name);
    out.push_back(std::move(ob));
  }
  return out;
}

}  // namespace faultloc::circuit
