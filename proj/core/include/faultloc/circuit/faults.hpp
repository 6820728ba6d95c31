// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <random>
#include <string>
#include <string_view>
#include <vector>

#include "faultloc/circuit/circuit.hpp"

namespace faultloc::circuit {

/// Uniform integer in [0, n) from a 64-bit engine. Unlike the standard
/// distributions, the result sequence is identical across library vendors.
std::uint64_t uniform_index(std::mt19937_64& rng, std::uint64_t n);

struct Fault {
  std::string gate;
  GateKind from;
  GateKind to;
  friend bool operator==(const Fault&, const Fault&) = default;
};

struct FaultyCircuit {
  Circuit circuit;
  std::vector<Fault> faults;  // in gate order
};

/// Replaces the kind of n distinct gates: NOT and BUFF swap, other kinds
/// move to a uniformly chosen different multi-input kind. Throws
/// PreconditionError unless 1 <= n <= |gates|.
FaultyCircuit inject_faults(const Circuit& c, int n, std::uint64_t seed);

struct CircuitObservation {
  std::vector<bool> inputs;
  std::vector<bool> outputs;  // expected (golden) outputs
  friend bool operator==(const CircuitObservation&,
                         const CircuitObservation&) = default;
};

/// Up to `count` distinct input vectors on which the circuits disagree,
/// each paired with the golden outputs. Inputs are drawn uniformly with
/// rejection, stopping after `max_draws` draws or once the whole input space
/// has been seen.
std::vector<CircuitObservation> generate_observations(
    const Circuit& golden, const Circuit& faulty, std::size_t count,
    std::uint64_t seed, std::size_t max_draws = 100000);

/// Random layered netlist with the given interface size, used by tests and
/// benchmarks. Every gate draws fanin from inputs and earlier gates; the
/// last `outputs` gates are the primary outputs.
Circuit random_circuit(int inputs, int gates, int outputs, std::uint64_t seed);

/// JSON: {"observations":[{"in":"0101","out":"10"}, ...]}
std::string observations_to_json(const std::vector<CircuitObservation>& obs);
/// Throws ParseError on malformed JSON or non-binary strings, and
/// PreconditionError when the widths do not match `c`.
std::vector<CircuitObservation> parse_observations(std::string_view json,
                                                   const Circuit& c);

std::string to_bits(const std::vector<bool>& bits);

}  // namespace faultloc::circuit
