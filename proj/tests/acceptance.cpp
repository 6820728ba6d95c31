// Acceptance suite: one PASS/FAIL line per criterion.
// Usage: faultloc_acceptance [--criterion N]
#include <chrono>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "cli.hpp"
#include "faultloc/circuit/circuit.hpp"
#include "faultloc/circuit/encode.hpp"
#include "faultloc/circuit/faults.hpp"
#include "faultloc/engines/engines.hpp"
#include "faultloc/formula/maxsat.hpp"
#include "faultloc/formula/mus.hpp"
#include "faultloc/minilang/compile.hpp"
#include "faultloc/minilang/parser.hpp"
#include "faultloc/minilang/test_case.hpp"
#include "support/brute_force.hpp"
#include "support/suite.hpp"

namespace fs = std::filesystem;
using namespace faultloc;
using engines::Diagnosis;
using Sets = std::set<std::vector<std::string>>;

namespace {

const fs::path kFixtures = FAULTLOC_FIXTURES;

std::string slurp(const fs::path& p) {
  std::ifstream in(p);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

/// Outcome of one criterion: ok plus a short detail for the report line.
struct Outcome {
  bool ok = true;
  std::string detail;

  void require(bool cond, const std::string& what) {
    if (!cond && ok) {
      ok = false;
      detail = what;
    }
  }
};

double seconds_since(std::chrono::steady_clock::time_point t) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t).count();
}

Sets sets_of(const std::vector<Diagnosis>& ds) {
  Sets out;
  for (const Diagnosis& d : ds) out.insert(d.components);
  return out;
}

Sets min_cardinality(const std::vector<Diagnosis>& ds) {
  std::size_t best = SIZE_MAX;
  for (const Diagnosis& d : ds) best = std::min(best, d.components.size());
  Sets out;
  for (const Diagnosis& d : ds)
    if (d.components.size() == best) out.insert(d.components);
  return out;
}

bool strict_subset(const std::vector<std::string>& a, const std::vector<std::string>& b) {
  const std::set<std::string> sa(a.begin(), a.end()), sb(b.begin(), b.end());
  return sa.size() < sb.size() && std::includes(sb.begin(), sb.end(), sa.begin(), sa.end());
}

bool has_redundancy(const std::vector<Diagnosis>& ds) {
  for (const Diagnosis& a : ds)
    for (const Diagnosis& b : ds)
      if (strict_subset(a.components, b.components)) return true;
  return false;
}

engines::DiagnosisProblem circuit_problem(const std::string& bench, const std::string& obs) {
  auto c = circuit::parse_bench(slurp(kFixtures / bench));
  auto o = circuit::parse_observations(slurp(kFixtures / obs), c);
  return engines::from_circuit(circuit::encode_instrumented(c, o));
}

const std::vector<faultloc::testing::SuiteInstance>& suite() {
  static const auto s = faultloc::testing::random_suite(200, 2024);
  return s;
}

Outcome motivating_example() {
  Outcome r;
  const auto start = std::chrono::steady_clock::now();
  const std::string prog = (kFixtures / "max3.mc").string();
  const std::string tests = (kFixtures / "max3_tests.json").string();
  auto localize = [&](const std::string& engine) {
    std::ostringstream out, err;
    int code = cli::run({"localize", "--engine", engine, "--weights", "hierarchical",
                         "--io-penalty", "1000", prog, tests},
                        out, err);
    r.require(code == 0, engine + " exited " + std::to_string(code) + ": " + err.str());
    return code == 0 ? nlohmann::json::parse(out.str()) : nlohmann::json();
  };
  const std::vector<int> want{5, 8, 11};
  auto cf = localize("cfaults");
  bool found = false;
  if (r.ok)
    for (const auto& d : cf["diagnoses"]) found |= d["lines"].get<std::vector<int>>() == want;
  r.require(found, "cfaults optima do not include lines {5,8,11}");
  auto sn = localize("sniper");
  r.require(r.ok && sn["selected"]["lines"].get<std::vector<int>>() == want,
            "sniper selected lines differ from {5,8,11}");
  r.require(seconds_since(start) < 60, "runtime above 60 s");
  if (r.ok)
    r.detail = std::to_string(cf["diagnoses"].size()) + " cfaults optima, sniper " +
               std::to_string(sn["diagnoses"].size()) + " unions";
  return r;
}

// Hard part (x1 v x2)(x2 v -x3)(-x2 v x3) with soft units -x1, -x2, -x3.
formula::CnfFormula section2_formula() {
  formula::CnfFormula f(3);
  f.add_clause({1, 2});
  f.add_clause({2, -3});
  f.add_clause({-2, 3});
  return f;
}

std::vector<formula::Lit> section2_softs() {
  return {formula::Lit::neg(1), formula::Lit::neg(2), formula::Lit::neg(3)};
}

Outcome mcs_example() {
  Outcome r;
  const auto start = std::chrono::steady_clock::now();
  auto mcses = formula::enumerate_mcses(section2_formula(), section2_softs());
  std::set<std::vector<std::size_t>> got(mcses.begin(), mcses.end());
  r.require(mcses.size() == 2 && got == std::set<std::vector<std::size_t>>{{0}, {1, 2}},
            "MCSes differ from {{-x1}, {-x2, -x3}}");
  r.require(seconds_since(start) < 1, "runtime above 1 s");
  if (r.ok) r.detail = "{{-x1}, {-x2, -x3}}";
  return r;
}

Outcome mus_example() {
  Outcome r;
  const auto start = std::chrono::steady_clock::now();
  auto softs = section2_softs();
  auto mus = formula::minimize_core(section2_formula(), softs);
  std::sort(mus.begin(), mus.end());
  using formula::Lit;
  const std::set<std::vector<Lit>> allowed{{Lit::neg(1), Lit::neg(2)}, {Lit::neg(1), Lit::neg(3)}};
  r.require(allowed.count(mus) > 0, "MUS outside {{-x1,-x2}, {-x1,-x3}}");
  r.require(seconds_since(start) < 1, "runtime above 1 s");
  if (r.ok) r.detail = mus[1] == Lit::neg(2) ? "{-x1, -x2}" : "{-x1, -x3}";
  return r;
}

Outcome oracle_equivalence() {
  Outcome r;
  const auto start = std::chrono::steady_clock::now();
  engines::EngineOptions cm;
  cm.core_minimize = true;
  int mismatches = 0;
  for (const auto& inst : suite()) {
    const auto& p = inst.problem;
    auto brute = engines::brute_force_diagnoses(p, p.components().size());
    bool ok = sets_of(engines::cfaults_localize(p).diagnoses) == min_cardinality(brute) &&
              sets_of(engines::hsd_localize(p).diagnoses) == sets_of(brute) &&
              sets_of(engines::hsd_localize(p, cm).diagnoses) == sets_of(brute);
    if (!ok && ++mismatches == 1) r.require(false, "mismatch on " + inst.name);
  }
  r.require(seconds_since(start) < 600, "suite above 10 min");
  if (r.ok) r.detail = std::to_string(suite().size()) + " circuits, 0 mismatches";
  else r.detail += " (" + std::to_string(mismatches) + " mismatches)";
  return r;
}

Outcome cost_agreement() {
  Outcome r;
  int mismatches = 0;
  for (const auto& inst : suite()) {
    const auto& p = inst.problem;
    auto sn = engines::sniper_localize(p);
    formula::Weight sn_min = sn.diagnoses.front().cost;
    for (const Diagnosis& d : sn.diagnoses) sn_min = std::min(sn_min, d.cost);
    const formula::Weight cf = engines::cfaults_localize(p).selected->cost;
    formula::Weight hsd_min = -1;
    for (const Diagnosis& d : engines::hsd_localize(p).diagnoses)
      if (hsd_min < 0 || d.cost < hsd_min) hsd_min = d.cost;
    if ((sn_min != cf || hsd_min != cf) && ++mismatches == 1)
      r.require(false, "cost mismatch on " + inst.name);
  }
  if (r.ok) r.detail = std::to_string(suite().size()) + " circuits, 0 mismatches";
  else r.detail += " (" + std::to_string(mismatches) + " mismatches)";
  return r;
}

Outcome redundancy_witness() {
  Outcome r;
  auto p = circuit_problem("redundancy.bench", "redundancy_obs.json");
  auto sn = engines::sniper_localize(p);
  auto cf = engines::cfaults_localize(p);
  r.require(has_redundancy(sn.diagnoses), "sniper emits no strict superset");
  r.require(!has_redundancy(cf.diagnoses), "cfaults emits a strict superset");
  if (r.ok)
    r.detail = "sniper " + std::to_string(sn.diagnoses.size()) + " unions with a superset pair";
  return r;
}

Outcome bugassist_gap() {
  Outcome r;
  auto p = circuit_problem("bugassist_gap.bench", "bugassist_gap_obs.json");
  auto ba = engines::bugassist_localize(p);
  auto cf = engines::cfaults_localize(p);
  r.require(ba.selected && engines::validate_diagnosis(p, *ba.selected),
            "bugassist selection does not validate");
  r.require(r.ok && ba.selected->cost > cf.selected->cost,
            "bugassist cost not above the cfaults optimum");
  if (r.ok)
    r.detail = "bugassist cost " + std::to_string(ba.selected->cost) + " > optimum " +
               std::to_string(cf.selected->cost);
  return r;
}

Outcome duality() {
  Outcome r;
  std::mt19937_64 rng(97);
  int formulas = 0, mismatches = 0;
  while (formulas < 100) {
    const int n = 3 + static_cast<int>(rng() % 5);
    auto hard = faultloc::testing::random_cnf(rng, n, n, 3);
    if (!faultloc::testing::brute_sat(hard)) continue;
    std::vector<formula::Lit> soft;
    const int k = 2 + static_cast<int>(rng() % 9);  // at most 10 soft units
    for (int j = 0; j < k; ++j)
      soft.push_back(formula::Lit::make(1 + static_cast<int>(rng() % n), rng() & 1U));
    auto muses = faultloc::testing::brute_muses(hard, soft);
    if (muses.empty()) continue;
    ++formulas;
    auto m = formula::enumerate_mcses(hard, soft);
    std::set<std::vector<std::size_t>> mcses(m.begin(), m.end());
    if (mcses != faultloc::testing::brute_minimal_hitting_sets(muses, soft.size()) &&
        ++mismatches == 1)
      r.require(false, "duality broken on formula " + std::to_string(formulas));
  }
  if (r.ok) r.detail = "100 inconsistent formulas, 0 mismatches";
  return r;
}

Outcome c17_end_to_end() {
  Outcome r;
  const auto golden = circuit::parse_bench(slurp(kFixtures / "c17.bench"), "c17");
  circuit::FaultyCircuit faulty;
  std::vector<circuit::CircuitObservation> obs;
  for (std::uint64_t seed = 1; obs.size() < 10; ++seed) {
    faulty = circuit::inject_faults(golden, 1, seed);
    obs = circuit::generate_observations(golden, faulty.circuit, 10, seed + 1);
  }
  const auto p = engines::from_circuit(circuit::encode_instrumented(faulty.circuit, obs));
  const std::string gate = faulty.faults.front().gate;
  double slowest = 0;
  for (engines::Engine e : engines::all_engines()) {
    const auto start = std::chrono::steady_clock::now();
    auto rep = engines::run_engine(e, p);
    const double t = seconds_since(start);
    slowest = std::max(slowest, t);
    const std::string name(engines::to_string(e));
    r.require(rep.selected.has_value(), name + " selected nothing");
    for (const Diagnosis& d : rep.diagnoses)
      r.require(engines::validate_diagnosis(p, d), name + " emitted an invalid diagnosis");
    r.require(t < 1, name + " took over 1 s");
  }
  bool hit = false;
  for (const Diagnosis& d : engines::cfaults_localize(p).diagnoses)
    hit |= std::find(d.components.begin(), d.components.end(), gate) != d.components.end();
  r.require(hit, "injected gate " + gate + " missing from the minimum diagnoses");
  if (r.ok) {
    std::ostringstream s;
    s << "gate " << gate << " found, slowest engine " << slowest << " s";
    r.detail = s.str();
  }
  return r;
}

Outcome shared_health() {
  Outcome r;
  for (const auto& inst : suite()) {
    const std::size_t gates = inst.faulty.circuit.gates.size();
    for (std::size_t m = 1; m <= inst.observations.size(); ++m) {
      std::vector<circuit::CircuitObservation> prefix(inst.observations.begin(),
                                                      inst.observations.begin() + m);
      auto f = circuit::encode_instrumented(inst.faulty.circuit, prefix);
      if (f.wcnf.soft.size() != gates) {
        r.require(false, "soft count varies with observations on " + inst.name);
        return r;
      }
    }
  }
  const auto prog = minilang::parse_program(slurp(kFixtures / "max3.mc"));
  const auto tests = minilang::parse_tests(slurp(kFixtures / "max3_tests.json"));
  std::set<std::size_t> counts;
  for (std::size_t m = 1; m <= tests.size(); ++m)
    counts.insert(minilang::build_trace_formula(prog, {tests.begin(), tests.begin() + m})
                      .wcnf.soft.size());
  r.require(counts.size() == 1, "program soft count varies with the number of tests");
  if (r.ok)
    r.detail = std::to_string(suite().size()) + " circuits and the max-of-three program with 1-3 tests";
  return r;
}

struct Criterion {
  int id;
  const char* name;
  std::function<Outcome()> run;
};

}  // namespace

int main(int argc, char** argv) {
  int only = 0;
  for (int i = 1; i < argc; ++i)
    if (std::strcmp(argv[i], "--criterion") == 0 && i + 1 < argc) only = std::atoi(argv[++i]);

  const std::vector<Criterion> criteria = {
      {1, "motivating example", motivating_example},
      {2, "MCS example", mcs_example},
      {3, "MUS example", mus_example},
      {4, "oracle equivalence", oracle_equivalence},
      {5, "cross-engine cost agreement", cost_agreement},
      {6, "redundancy witness", redundancy_witness},
      {7, "bugassist non-minimality", bugassist_gap},
      {8, "MCS/MUS duality", duality},
      {9, "c17 end-to-end", c17_end_to_end},
      {10, "shared health variables", shared_health},
  };
  int failed = 0, ran = 0;
  for (const Criterion& c : criteria) {
    if (only && c.id != only) continue;
    ++ran;
    const auto start = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = c.run();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    std::ostringstream t;
    t.precision(3);
    t << std::fixed << seconds_since(start);
    std::cout << (o.ok ? "PASS" : "FAIL") << "  criterion " << c.id << " (" << c.name << "): "
              << o.detail << " [" << t.str() << " s]" << std::endl;
    failed += !o.ok;
  }
  if (ran == 0) {
    std::cerr << "no such criterion\n";
    return 2;
  }
  return failed == 0 ? 0 : 1;
}
