#include <gtest/gtest.h>

#include <random>
#include <set>

#include "faultloc/error.hpp"
#include "faultloc/formula/cdcl_solver.hpp"
#include "faultloc/formula/dimacs.hpp"
#include "faultloc/formula/hitting_set.hpp"
#include "faultloc/formula/maxsat.hpp"
#include "faultloc/formula/mus.hpp"
#include "support/brute_force.hpp"

using namespace faultloc;
using namespace faultloc::formula;
using namespace faultloc::testing;

namespace {

Lit L(int d) { return Lit::from_dimacs(d); }

CnfFormula cnf(int vars, std::initializer_list<std::initializer_list<int>> cs) {
  CnfFormula f(vars);
  for (auto c : cs) f.add_clause(c);
  return f;
}

std::set<std::vector<std::size_t>> as_set(
    const std::vector<std::vector<std::size_t>>& v) {
  return {v.begin(), v.end()};
}

CnfFormula pigeonhole(int pigeons, int holes) {
  // var p*holes + h + 1: pigeon p sits in hole h
  CnfFormula f(pigeons * holes);
  for (int h = 0; h < holes; ++h)
    for (int p = 0; p < pigeons; ++p)
      for (int q = p + 1; q < pigeons; ++q)
        f.add_clause({-(p * holes + h + 1), -(q * holes + h + 1)});
  return f;
}

WcnfFormula random_wcnf(std::mt19937_64& rng, int vars, bool weighted) {
  WcnfFormula w;
  w.hard = random_cnf(rng, vars, vars, 3);
  int softs = 3 + static_cast<int>(rng() % 6);
  for (int i = 0; i < softs; ++i) {
    Weight wt = weighted ? 1 + static_cast<Weight>(rng() % 9) : 1;
    if (rng() % 3 == 0) {
      Clause c{Lit::make(1 + static_cast<int>(rng() % vars), rng() & 1U),
               Lit::make(1 + static_cast<int>(rng() % vars), rng() & 1U)};
      if (normalize(c)) w.add_soft(c, wt);
    } else {
      w.add_soft(Lit::make(1 + static_cast<int>(rng() % vars), rng() & 1U), wt);
    }
  }
  return w;
}

}  // namespace

namespace faultloc::formula {
void PrintTo(MaxSatAlgorithm a, std::ostream* os) {
  *os << (a == MaxSatAlgorithm::kCoreGuided ? "core-guided" : "linear");
}
}  // namespace faultloc::formula

TEST(Sat, SatisfiableExample) {
  CnfFormula f = cnf(3, {{1}, {-1, 2}, {2, 3}, {-1, -3}});
  SatOutcome r = sat_solve(f);
  ASSERT_TRUE(r.sat());
  EXPECT_TRUE(f.satisfied_by(r.model));
  EXPECT_TRUE(r.model[1]);
  EXPECT_TRUE(r.model[2]);
  EXPECT_FALSE(r.model[3]);
}

TEST(Sat, UnsatisfiableExample) {
  CnfFormula f = cnf(3, {{1}, {-1, 2}, {2, 3}, {-1, -3}, {3}});
  EXPECT_FALSE(sat_solve(f).sat());
}

TEST(Sat, EmptyFormulaIsSat) {
  SatOutcome r = sat_solve(CnfFormula{});
  EXPECT_TRUE(r.sat());
  EXPECT_TRUE(r.core.empty());
}

TEST(Sat, MalformedFormulaRejected) {
  CnfFormula f(2);
  f.add_clause({1, 2});
  EXPECT_THROW(f.add_clause({0}), FormulaError);
  EXPECT_THROW(sat_solve(f, std::vector<Lit>{L(5)}), FormulaError);
}

TEST(Sat, CoreIsSubsetOfAssumptions) {
  CnfFormula f = cnf(3, {{-1, 2}, {2, 3}, {-1, -3}});
  std::vector<Lit> as{L(1), L(3), L(-2)};
  SatOutcome r = sat_solve(f, as);
  ASSERT_FALSE(r.sat());
  for (Lit l : r.core)
    EXPECT_NE(std::find(as.begin(), as.end(), l), as.end());
  EXPECT_FALSE(brute_sat(f, r.core));
}

TEST(Sat, RandomAgreesWithBruteForce) {
  std::mt19937_64 rng(7);
  for (int i = 0; i < 300; ++i) {
    int n = 3 + static_cast<int>(rng() % 8);
    CnfFormula f = random_cnf(rng, n, 2 + static_cast<int>(rng() % (5 * n)), 3);
    std::vector<Lit> as;
    for (int k = 0; k < 3; ++k)
      as.push_back(Lit::make(1 + static_cast<int>(rng() % n), rng() & 1U));
    SatOutcome r = sat_solve(f, as);
    ASSERT_EQ(r.sat(), brute_sat(f, as)) << "instance " << i;
    if (r.sat()) {
      EXPECT_TRUE(f.satisfied_by(r.model));
      for (Lit a : as) EXPECT_TRUE(a.eval(r.model));
    } else {
      EXPECT_FALSE(brute_sat(f, r.core));
    }
  }
}

TEST(Sat, DeterministicAcrossRuns) {
  std::mt19937_64 rng(11);
  CnfFormula f = random_cnf(rng, 40, 170, 3);
  SatOutcome a = sat_solve(f), b = sat_solve(f);
  EXPECT_EQ(a.status, b.status);
  EXPECT_EQ(a.model, b.model);
}

TEST(Sat, IncrementalAcrossCalls) {
  CdclSolver s;
  s.add_formula(pigeonhole(3, 2));
  EXPECT_TRUE(s.solve().sat());
  for (int p = 0; p < 3; ++p) s.add_clause({L(p * 2 + 1), L(p * 2 + 2)});
  EXPECT_FALSE(s.solve().sat());
}

TEST(Core, Example3) {
  CnfFormula f = cnf(3, {{-1, 2}, {2, 3}, {-1, -3}});
  std::vector<Lit> cands{L(1), L(3)};
  auto core = extract_unsat_core(f, cands);
  EXPECT_EQ(core, cands);
  EXPECT_FALSE(brute_sat(f, core));
}

TEST(Core, DirectContradiction) {
  CnfFormula f = cnf(1, {{-1}});
  std::vector<Lit> c{L(1)};
  EXPECT_EQ(extract_unsat_core(f, c), c);
  EXPECT_EQ(minimize_core(f, c), c);
}

TEST(Core, SatisfiableCandidatesRejected) {
  CnfFormula f = cnf(2, {{1, 2}});
  std::vector<Lit> c{L(1)};
  EXPECT_THROW(extract_unsat_core(f, c), PreconditionError);
  EXPECT_THROW(minimize_core(f, c), PreconditionError);
}

TEST(Core, Pigeonhole) {
  CnfFormula f = pigeonhole(3, 2);
  std::vector<Lit> cands;
  // "at least one hole" per pigeon as selector-guarded clauses
  CnfFormula g = f;
  for (int p = 0; p < 3; ++p) {
    int sel = g.new_var();
    g.add_clause({-sel, p * 2 + 1, p * 2 + 2});
    cands.push_back(L(sel));
  }
  auto core = extract_unsat_core(g, cands);
  EXPECT_FALSE(sat_solve(g, core).sat());
  auto placements = std::vector<Lit>{};
  for (int v = 1; v <= 6; ++v) placements.push_back(L(v));
  auto core2 = extract_unsat_core(f, placements);
  EXPECT_FALSE(sat_solve(f, core2).sat());
}

TEST(Mus, Example6) {
  CnfFormula f = cnf(3, {{1, 2}, {2, -3}, {-2, 3}});
  std::vector<Lit> core{L(-1), L(-2), L(-3)};
  auto mus = minimize_core(f, core);
  std::set<std::vector<Lit>> allowed{{L(-1), L(-2)}, {L(-1), L(-3)}};
  EXPECT_TRUE(allowed.count(mus));
}

TEST(Mus, RandomPassesDeletionAudit) {
  std::mt19937_64 rng(3);
  int checked = 0;
  for (int i = 0; i < 200 && checked < 60; ++i) {
    int n = 6 + static_cast<int>(rng() % 5);
    CnfFormula f = random_cnf(rng, n, 2 * n, 3);
    std::vector<Lit> units;
    for (int v = 1; v <= n; ++v) units.push_back(Lit::make(v, rng() & 1U));
    if (brute_sat(f, units)) continue;
    ++checked;
    auto mus = minimize_core(f, units);
    EXPECT_FALSE(brute_sat(f, mus));
    for (std::size_t k = 0; k < mus.size(); ++k) {
      auto rest = mus;
      rest.erase(rest.begin() + static_cast<long>(k));
      EXPECT_TRUE(sat_solve(f, rest).sat());
    }
  }
  EXPECT_GE(checked, 20);
}

class MaxSat : public ::testing::TestWithParam<MaxSatAlgorithm> {
 protected:
  MaxSatOptions opts() const {
    MaxSatOptions o;
    o.algorithm = GetParam();
    return o;
  }
};

TEST_P(MaxSat, ExampleCostOne) {
  WcnfFormula w;
  w.hard = cnf(3, {{1, 2}, {-2, 3}});
  w.add_soft(L(-1), 1);
  w.add_soft(L(-3), 1);
  MaxSatSolution s = maxsat_solve(w, opts());
  EXPECT_EQ(s.cost, 1);
  EXPECT_TRUE(w.hard.satisfied_by(s.model));
  EXPECT_EQ(w.cost(s.model), 1);
}

TEST_P(MaxSat, AllSoftSatisfiable) {
  WcnfFormula w;
  w.hard.ensure_vars(2);
  w.add_soft(L(1), 3);
  w.add_soft(L(-2), 2);
  EXPECT_EQ(maxsat_solve(w, opts()).cost, 0);
}

TEST_P(MaxSat, HardUnsatRaises) {
  WcnfFormula w;
  w.hard = cnf(1, {{1}, {-1}});
  w.add_soft(L(1), 1);
  EXPECT_THROW(maxsat_solve(w, opts()), NoDiagnosisError);
  EXPECT_THROW(enumerate_optimal_solutions(w, {opts()}), NoDiagnosisError);
}

TEST_P(MaxSat, RandomMatchesBruteForce) {
  std::mt19937_64 rng(GetParam() == MaxSatAlgorithm::kCoreGuided ? 21 : 22);
  int solved = 0;
  for (int i = 0; i < 250; ++i) {
    int n = 3 + static_cast<int>(rng() % 10);
    WcnfFormula w = random_wcnf(rng, n, i % 2 == 0);
    Weight expect = brute_maxsat(w);
    if (expect < 0) {
      EXPECT_THROW(maxsat_solve(w, opts()), NoDiagnosisError);
      continue;
    }
    ++solved;
    MaxSatSolution s = maxsat_solve(w, opts());
    ASSERT_EQ(s.cost, expect) << "instance " << i;
    EXPECT_TRUE(w.hard.satisfied_by(s.model));
    EXPECT_EQ(w.cost(s.model), s.cost);
  }
  EXPECT_GT(solved, 100);
}

TEST_P(MaxSat, EnumerationSymmetricPair) {
  WcnfFormula w;
  w.hard = cnf(2, {{-1, -2}});
  w.add_soft(L(1), 1);
  w.add_soft(L(2), 1);
  auto sets = enumerate_optimal_solutions(w, {opts()});
  EXPECT_EQ(as_set(sets), (std::set<std::vector<std::size_t>>{{0}, {1}}));
  EXPECT_EQ(sets.size(), 2u);
}

TEST_P(MaxSat, EnumerationMatchesBruteForce) {
  std::mt19937_64 rng(GetParam() == MaxSatAlgorithm::kCoreGuided ? 31 : 32);
  for (int i = 0; i < 150; ++i) {
    int n = 3 + static_cast<int>(rng() % 10);
    WcnfFormula w = random_wcnf(rng, n, i % 2 == 1);
    if (brute_maxsat(w) < 0) continue;
    auto sets = enumerate_optimal_solutions(w, {opts()});
    auto uniq = as_set(sets);
    ASSERT_EQ(uniq.size(), sets.size()) << "duplicates, instance " << i;
    ASSERT_EQ(uniq, brute_optimal_sets(w)) << "instance " << i;
  }
}

TEST_P(MaxSat, EnumerationBudget) {
  WcnfFormula w;
  w.hard.ensure_vars(4);
  w.hard.add_clause({-1, -2});
  w.hard.add_clause({-3, -4});
  for (int v = 1; v <= 4; ++v) w.add_soft(L(v), 1);
  EnumerationOptions o{opts(), 2};
  EXPECT_THROW(enumerate_optimal_solutions(w, o), BudgetExceededError);
  o.max_solutions = 4;
  EXPECT_EQ(enumerate_optimal_solutions(w, o).size(), 4u);
}

TEST_P(MaxSat, McsExample5) {
  CnfFormula hard = cnf(3, {{1, 2}, {2, -3}, {-2, 3}});
  std::vector<Lit> soft{L(-1), L(-2), L(-3)};
  auto mcses = enumerate_mcses(hard, soft, {opts()});
  EXPECT_EQ(mcses, (std::vector<std::vector<std::size_t>>{{0}, {1, 2}}));
}

TEST_P(MaxSat, McsConsistentIsEmpty) {
  CnfFormula hard = cnf(2, {{1, 2}});
  std::vector<Lit> soft{L(1), L(2)};
  EXPECT_TRUE(enumerate_mcses(hard, soft, {opts()}).empty());
}

TEST_P(MaxSat, McsRandomMatchesBruteForce) {
  std::mt19937_64 rng(GetParam() == MaxSatAlgorithm::kCoreGuided ? 41 : 42);
  for (int i = 0; i < 120; ++i) {
    int n = 3 + static_cast<int>(rng() % 6);
    CnfFormula hard = random_cnf(rng, n, n, 3);
    if (!brute_sat(hard)) continue;
    std::vector<Lit> soft;
    int k = 2 + static_cast<int>(rng() % 7);
    for (int j = 0; j < k; ++j)
      soft.push_back(Lit::make(1 + static_cast<int>(rng() % n), rng() & 1U));
    auto mcses = enumerate_mcses(hard, soft, {opts()});
    ASSERT_EQ(as_set(mcses), brute_mcses(hard, soft)) << "instance " << i;
    for (std::size_t j = 1; j < mcses.size(); ++j)
      EXPECT_LE(mcses[j - 1].size(), mcses[j].size());
  }
}

INSTANTIATE_TEST_SUITE_P(Algorithms, MaxSat,
                         ::testing::Values(MaxSatAlgorithm::kCoreGuided,
                                           MaxSatAlgorithm::kLinearSearch),
                         [](const auto& info) {
                           return info.param == MaxSatAlgorithm::kCoreGuided
                                      ? std::string("CoreGuided")
                                      : std::string("LinearSearch");
                         });

TEST(MaxSatProperty, CostEqualsCheapestMcs) {
  std::mt19937_64 rng(51);
  for (int i = 0; i < 80; ++i) {
    int n = 4 + static_cast<int>(rng() % 5);
    CnfFormula hard = random_cnf(rng, n, n, 3);
    if (!brute_sat(hard)) continue;
    std::vector<Lit> soft;
    for (int j = 0; j < 6; ++j)
      soft.push_back(Lit::make(1 + static_cast<int>(rng() % n), rng() & 1U));
    WcnfFormula w;
    w.hard = hard;
    for (Lit l : soft) w.add_soft(l, 1);
    auto mcses = enumerate_mcses(hard, soft);
    std::size_t best = 0;
    if (!mcses.empty()) {
      best = mcses[0].size();
      for (const auto& m : mcses) best = std::min(best, m.size());
    }
    EXPECT_EQ(maxsat_solve(w).cost, static_cast<Weight>(best));
  }
}

TEST(MaxSatProperty, StratifiedHierarchicalWeights) {
  // One cheap fix vs. several expensive ones.
  WcnfFormula w;
  w.hard = cnf(4, {{-1, -2}, {-1, -3}, {-1, -4}});
  w.add_soft(L(1), 1000);
  w.add_soft(L(2), 1);
  w.add_soft(L(3), 1);
  w.add_soft(L(4), 1);
  EXPECT_EQ(maxsat_solve(w).cost, 3);
  MaxSatOptions flat;
  flat.stratify = false;
  EXPECT_EQ(maxsat_solve(w, flat).cost, 3);
}

TEST(HittingSet, Trivial) {
  EXPECT_EQ(minimum_hitting_set({}, {}), std::vector<std::string>{});
  EXPECT_EQ(minimum_hitting_set({{"a", "b"}, {"b", "c"}}),
            std::vector<std::string>{"b"});
}

TEST(HittingSet, BlockedSupersetsAndExhaustion) {
  std::vector<std::vector<std::string>> sets{{"a", "b"}};
  auto first = minimum_hitting_set(sets, {{"a"}});
  EXPECT_EQ(first, std::vector<std::string>{"b"});
  EXPECT_FALSE(minimum_hitting_set(sets, {{"a"}, {"b"}}).has_value());
}

TEST(HittingSet, RandomMatchesBruteForce) {
  std::mt19937_64 rng(61);
  const std::vector<std::string> names{"a", "b", "c", "d", "e", "f"};
  for (int i = 0; i < 200; ++i) {
    std::vector<std::vector<std::string>> sets;
    std::vector<std::uint32_t> masks;
    int k = 1 + static_cast<int>(rng() % 5);
    for (int j = 0; j < k; ++j) {
      std::uint32_t m = 1 + static_cast<std::uint32_t>(rng() % 63);
      masks.push_back(m);
      std::vector<std::string> s;
      for (int e = 0; e < 6; ++e)
        if (m >> e & 1U) s.push_back(names[e]);
      sets.push_back(s);
    }
    std::size_t best = 7;
    for (std::uint32_t h = 0; h < 64; ++h) {
      bool ok = true;
      for (auto m : masks) ok = ok && (h & m);
      if (ok) best = std::min<std::size_t>(best, std::popcount(h));
    }
    auto hs = minimum_hitting_set(sets);
    ASSERT_TRUE(hs.has_value());
    EXPECT_EQ(hs->size(), best);
  }
}

TEST(Duality, McsesAreMinimalHittingSetsOfMuses) {
  std::mt19937_64 rng(71);
  int instances = 0, inconsistent = 0;
  for (int i = 0; instances < 100 && i < 1000; ++i) {
    int n = 3 + static_cast<int>(rng() % 5);
    CnfFormula hard = random_cnf(rng, n, n, 3);
    if (!brute_sat(hard)) continue;
    std::vector<Lit> soft;
    int k = 2 + static_cast<int>(rng() % 9);
    for (int j = 0; j < k; ++j)
      soft.push_back(Lit::make(1 + static_cast<int>(rng() % n), rng() & 1U));
    ++instances;
    auto mcses = as_set(enumerate_mcses(hard, soft));
    auto muses = brute_muses(hard, soft);
    if (muses.empty()) {
      // Consistent: the enumeration reports nothing to correct.
      EXPECT_TRUE(mcses.empty());
      continue;
    }
    ++inconsistent;
    EXPECT_EQ(mcses, brute_minimal_hitting_sets(muses, soft.size()))
        << "instance " << i;
    EXPECT_EQ(muses, brute_minimal_hitting_sets(mcses, soft.size()))
        << "instance " << i;
  }
  EXPECT_EQ(instances, 100);
  EXPECT_GE(inconsistent, 50);
}

TEST(Dimacs, CnfRoundTrip) {
  CnfFormula f = cnf(4, {{1, -2}, {3}, {-4, 2, 1}});
  std::string text = write_dimacs_cnf(f);
  EXPECT_EQ(text, "p cnf 4 3\n1 -2 0\n3 0\n-4 2 1 0\n");
  EXPECT_EQ(parse_dimacs_cnf(text), f);
}

TEST(Dimacs, WcnfRoundTrip) {
  WcnfFormula w;
  w.hard = cnf(3, {{1, 2}, {-2, 3}});
  w.add_soft(L(-1), 1);
  w.add_soft(Clause{L(-3), L(2)}, 1000);
  std::string text = write_wcnf(w);
  EXPECT_EQ(text, "h 1 2 0\nh -2 3 0\n1 -1 0\n1000 -3 2 0\n");
  WcnfFormula back = parse_wcnf(text);
  EXPECT_EQ(back, w);
  EXPECT_EQ(write_wcnf(back), text);
}

TEST(Dimacs, LegacyWcnf) {
  WcnfFormula w = parse_wcnf("c x\np wcnf 2 3 10\n10 1 2 0\n3 -1 0\n1 -2 0\n");
  EXPECT_EQ(w.hard.size(), 1u);
  ASSERT_EQ(w.soft.size(), 2u);
  EXPECT_EQ(w.soft[0].weight, 3);
}

TEST(Dimacs, ParseErrorsCarryLine) {
  try {
    parse_dimacs_cnf("p cnf 2 1\n1 x 0\n");
    FAIL();
  } catch (const ParseError& e) {
    EXPECT_EQ(e.line(), 2);
  }
}
