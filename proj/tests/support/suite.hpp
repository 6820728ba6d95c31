// Seeded random circuit diagnosis instances shared by unit and acceptance tests.
#pragma once

#include <random>
#include <string>
#include <vector>

#include "faultloc/circuit/encode.hpp"
#include "faultloc/circuit/faults.hpp"
#include "faultloc/engines/problem.hpp"

namespace faultloc::testing {

struct SuiteInstance {
  std::string name;
  circuit::Circuit golden;
  circuit::FaultyCircuit faulty;
  std::vector<circuit::CircuitObservation> observations;
  engines::DiagnosisProblem problem;
  std::size_t num_softs = 0;
};

inline int draw(std::mt19937_64& rng, int lo, int hi) {
  return lo + static_cast<int>(circuit::uniform_index(rng, static_cast<std::uint64_t>(hi - lo + 1)));
}

/// Circuits with at most 15 gates and 5 inputs, 1-3 injected faults and
/// 2-5 failing observations. Instances whose faults are unobservable (fewer
/// than 2 failing inputs) are skipped.
inline std::vector<SuiteInstance> random_suite(std::size_t count, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::vector<SuiteInstance> out;
  while (out.size() < count) {
    const std::uint64_t s = rng();
    const int inputs = draw(rng, 2, 5);
    const int gates = draw(rng, 4, 15);
    const int outputs = draw(rng, 1, std::min(3, gates));
    const int faults = draw(rng, 1, 3);
    const int obs = draw(rng, 2, 5);
    SuiteInstance inst;
    inst.golden = circuit::random_circuit(inputs, gates, outputs, s);
    inst.faulty = circuit::inject_faults(inst.golden, faults, s + 1);
    inst.observations =
        circuit::generate_observations(inst.golden, inst.faulty.circuit, obs, s + 2);
    if (inst.observations.size() < 2) continue;
    inst.name = "rnd" + std::to_string(out.size()) + "_i" + std::to_string(inputs) + "_g" +
                std::to_string(gates) + "_f" + std::to_string(faults) + "_o" +
                std::to_string(inst.observations.size());
    auto f = circuit::encode_instrumented(inst.faulty.circuit, inst.observations);
    inst.num_softs = f.wcnf.soft.size();
    inst.problem = engines::from_circuit(f);
    out.push_back(std::move(inst));
  }
  return out;
}

}  // namespace faultloc::testing
