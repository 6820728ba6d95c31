// SPDX-License-Identifier: Apache-2.0
#include <benchmark/benchmark.h>

#include <fstream>
#include <random>
#include <sstream>
#include <string>

#include "faultloc/circuit/encode.hpp"
#include "faultloc/circuit/faults.hpp"
#include "faultloc/engines/engines.hpp"
#include "faultloc/formula/cdcl_solver.hpp"
#include "faultloc/formula/maxsat.hpp"
#include "faultloc/minilang/compile.hpp"
#include "faultloc/minilang/parser.hpp"
#include "faultloc/minilang/test_case.hpp"

using namespace faultloc;
using formula::Lit;

namespace {

std::string read_fixture(const std::string& name) {
  std::ifstream in(std::string(FAULTLOC_FIXTURES) + "/" + name);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

formula::CnfFormula random_3cnf(int vars, int clauses, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  formula::CnfFormula f(vars);
  for (int c = 0; c < clauses; ++c) {
    formula::Clause cl;
    for (int k = 0; k < 3; ++k)
      cl.push_back(Lit::make(1 + static_cast<int>(rng() % vars), rng() & 1));
    f.add_clause(cl);
  }
  return f;
}

// Random circuit with one injected fault and up to `obs` failing inputs.
engines::DiagnosisProblem circuit_problem(int inputs, int gates, std::size_t obs,
                                          std::uint64_t seed) {
  for (;; ++seed) {
    auto golden = circuit::random_circuit(inputs, gates, 2, seed);
    auto faulty = circuit::inject_faults(golden, 1, seed);
    auto o = circuit::generate_observations(golden, faulty.circuit, obs, seed + 1);
    if (o.empty()) continue;
    return engines::from_circuit(circuit::encode_instrumented(faulty.circuit, o));
  }
}

engines::DiagnosisProblem c17_problem() {
  auto golden = circuit::parse_bench(read_fixture("c17.bench"), "c17");
  for (std::uint64_t seed = 1;; ++seed) {
    auto faulty = circuit::inject_faults(golden, 1, seed);
    auto o = circuit::generate_observations(golden, faulty.circuit, 10, seed + 1);
    if (o.size() == 10)
      return engines::from_circuit(circuit::encode_instrumented(faulty.circuit, o));
  }
}

void BM_CdclRandom3Sat(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  auto f = random_3cnf(n, static_cast<int>(4.26 * n), 7);
  for (auto _ : state) {
    formula::CdclSolver s;
    s.ensure_vars(f.num_vars());
    for (const auto& c : f.clauses()) s.add_clause(c);
    benchmark::DoNotOptimize(s.solve({}).sat());
  }
}
BENCHMARK(BM_CdclRandom3Sat)->Arg(50)->Arg(100)->Arg(150);

void BM_MaxSatCircuit(benchmark::State& state) {
  auto p = circuit_problem(6, static_cast<int>(state.range(0)), 8, 11);
  for (auto _ : state) benchmark::DoNotOptimize(formula::maxsat_solve(p.unified).cost);
}
BENCHMARK(BM_MaxSatCircuit)->Arg(20)->Arg(40)->Arg(80);

void BM_EncodeCircuit(benchmark::State& state) {
  const int gates = static_cast<int>(state.range(0));
  for (std::uint64_t seed = 3;; ++seed) {
    auto golden = circuit::random_circuit(8, gates, 4, seed);
    auto faulty = circuit::inject_faults(golden, 1, seed);
    auto o = circuit::generate_observations(golden, faulty.circuit, 10, seed + 1);
    if (o.empty()) continue;
    for (auto _ : state)
      benchmark::DoNotOptimize(circuit::encode_instrumented(faulty.circuit, o).wcnf.soft.size());
    return;
  }
}
BENCHMARK(BM_EncodeCircuit)->Arg(50)->Arg(200);

void BM_EngineC17(benchmark::State& state) {
  const auto engine = engines::all_engines()[static_cast<std::size_t>(state.range(0))];
  state.SetLabel(std::string(engines::to_string(engine)));
  auto p = c17_problem();
  for (auto _ : state) benchmark::DoNotOptimize(engines::run_engine(engine, p).diagnoses.size());
}
BENCHMARK(BM_EngineC17)->DenseRange(0, 4);

void BM_EngineRandomCircuit(benchmark::State& state) {
  const auto engine = engines::all_engines()[static_cast<std::size_t>(state.range(0))];
  state.SetLabel(std::string(engines::to_string(engine)));
  auto p = circuit_problem(6, 30, 6, 21);
  for (auto _ : state) {
    try {
      benchmark::DoNotOptimize(engines::run_engine(engine, p).diagnoses.size());
    } catch (const NoDiagnosisError&) {
    }
  }
}
BENCHMARK(BM_EngineRandomCircuit)->DenseRange(0, 4);

void BM_MinilangPipeline(benchmark::State& state) {
  auto prog = minilang::parse_program(read_fixture("max3.mc"));
  auto tests = minilang::parse_tests(read_fixture("max3_tests.json"));
  for (auto _ : state) {
    auto tf = minilang::build_trace_formula(prog, tests);
    auto p = engines::from_trace(tf);
    benchmark::DoNotOptimize(engines::cfaults_localize(p).diagnoses.size());
  }
}
BENCHMARK(BM_MinilangPipeline)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
