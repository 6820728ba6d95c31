// SPDX-License-Identifier: Apache-2.0
#include "faultloc/circuit/encode.hpp"

#include <unordered_map>

#include "faultloc/error.hpp"

namespace faultloc::circuit {

using formula::Clause;
using formula::Lit;

namespace {

void emit(std::vector<Clause>& out, Lit guard, Clause c) {
  if (guard.valid()) c.insert(c.begin(), ~guard);
  out.push_back(std::move(c));
}

// y <-> a xor b
void xor2(Lit y, Lit a, Lit b, Lit guard, std::vector<Clause>& out) {
  emit(out, guard, {~y, a, b});
  emit(out, guard, {~y, ~a, ~b});
  emit(out, guard, {y, ~a, b});
  emit(out, guard, {y, a, ~b});
}

}  // namespace

void tseitin_gate(GateKind kind, Lit y, const std::vector<Lit>& in, Lit guard,
                  const std::function<Lit()>& fresh, std::vector<Clause>& out) {
  switch (kind) {
    case GateKind::kBuff:
    case GateKind::kNot: {
      Lit a = kind == GateKind::kNot ? ~in[0] : in[0];
      emit(out, guard, {~y, a});
      emit(out, guard, {y, ~a});
      return;
    }
    case GateKind::kAnd:
    case GateKind::kNand:
    case GateKind::kOr:
    case GateKind::kNor: {
      // OR is AND over complemented fanin with complemented output.
      bool is_or = kind == GateKind::kOr || kind == GateKind::kNor;
      bool inverted = kind == GateKind::kNand || kind == GateKind::kOr;
      Lit z = inverted ? ~y : y;
      Clause big{z};
      for (Lit a : in) {
        Lit x = is_or ? ~a : a;
        emit(out, guard, {~z, x});
        big.push_back(~x);
      }
      emit(out, guard, std::move(big));
      return;
    }
    case GateKind::kXor:
    case GateKind::kXnor: {
      Lit acc = in[0];
      for (std::size_t i = 1; i + 1 < in.size(); ++i) {
        Lit t = fresh();
        xor2(t, acc, in[i], guard, out);
        acc = t;
      }
      xor2(kind == GateKind::kXor ? y : ~y, acc, in.back(), guard, out);
      return;
    }
  }
}

InstrumentedCircuitFormula encode_instrumented(
    const Circuit& c, const std::vector<CircuitObservation>& obs) {
  if (obs.empty())
    throw PreconditionError("encode_instrumented: no observations");
  InstrumentedCircuitFormula f;
  const int gates = static_cast<int>(c.gates.size());
  const int inputs = static_cast<int>(c.inputs.size());
  for (int j = 0; j < gates; ++j) f.health.add(c.gates[j].id, j + 1);

  std::unordered_map<std::string, int> signal;  // name -> index in a copy
  for (int i = 0; i < inputs; ++i) signal[c.inputs[i]] = i;
  for (int j = 0; j < gates; ++j) signal[c.gates[j].id] = inputs + j;

  int next = gates;
  std::vector<Clause> clauses;
  for (const CircuitObservation& o : obs) {
    if (o.inputs.size() != c.inputs.size() ||
        o.outputs.size() != c.outputs.size())
      throw PreconditionError("observation width does not match circuit");
    const int base = next;
    next += inputs + gates;
    f.offsets.push_back(base);
    auto var = [&](const std::string& s) { return Lit::pos(base + signal.at(s) + 1); };
    std::function<Lit()> fresh = [&] { return Lit::pos(++next); };

    clauses.clear();
    for (int j = 0; j < gates; ++j) {
      const Gate& g = c.gates[j];
      std::vector<Lit> fanin;
      for (const std::string& a : g.fanin) fanin.push_back(var(a));
      tseitin_gate(g.kind, var(g.id), fanin, Lit::pos(j + 1), fresh, clauses);
    }
    for (int i = 0; i < inputs; ++i)
      clauses.push_back({Lit::make(base + i + 1, !o.inputs[i])});
    for (std::size_t k = 0; k < c.outputs.size(); ++k) {
      Lit y = var(c.outputs[k]);
      clauses.push_back({o.outputs[k] ? y : ~y});
    }

    formula::CnfFormula copy(gates);
    for (Clause& cl : clauses) {
      f.wcnf.hard.add_clause(cl);
      copy.add_clause(std::move(cl));
    }
    f.per_observation.push_back(std::move(copy));
  }
  f.wcnf.hard.ensure_vars(next);
  for (auto& p : f.per_observation) p.ensure_vars(next);
  for (int j = 0; j < gates; ++j) f.wcnf.add_soft(Lit::pos(j + 1), 1);
  return f;
}

}  // namespace faultloc::circuit
