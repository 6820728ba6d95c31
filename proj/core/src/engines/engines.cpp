// SPDX-License-Identifier: Apache-2.0
#include "faultloc/engines/engines.hpp"

#include <algorithm>
#include <chrono>
#include <map>
#include <set>
#include <tuple>

#include <nlohmann/json.hpp>

#include "faultloc/formula/hitting_set.hpp"
#include "faultloc/formula/mus.hpp"
#include "faultloc/formula/sat_oracle.hpp"

namespace faultloc::engines {

using formula::Lit;
using Indices = std::vector<std::size_t>;

std::string_view to_string(Engine e) {
  switch (e) {
    case Engine::kCFaults: return "cfaults";
    case Engine::kHsd: return "hsd";
    case Engine::kHsdCoreMinimize: return "hsd-cm";
    case Engine::kBugAssist: return "bugassist";
    case Engine::kSniper: return "sniper";
  }
  return "?";
}

Engine parse_engine(std::string_view name) {
  for (Engine e : all_engines())
    if (to_string(e) == name) return e;
  throw PreconditionError("unknown engine '" + std::string(name) + "'");
}

const std::vector<Engine>& all_engines() {
  static const std::vector<Engine> all = {Engine::kCFaults, Engine::kHsd,
                                          Engine::kHsdCoreMinimize, Engine::kBugAssist,
                                          Engine::kSniper};
  return all;
}

namespace {

Diagnosis from_indices(const DiagnosisProblem& p, const Indices& idx) {
  Diagnosis d;
  for (std::size_t i : idx) {
    d.components.push_back(p.components()[i]);
    d.cost += p.unified.soft[i].weight;
  }
  return d;
}

std::size_t io_count(const DiagnosisProblem& p, const Diagnosis& d) {
  std::size_t n = 0;
  for (const std::string& c : d.components) n += p.io_components.count(c);
  return n;
}

/// Cheapest diagnosis; ties go to fewer I/O components, then first found.
const Diagnosis& preferred(const DiagnosisProblem& p, const std::vector<Diagnosis>& ds) {
  std::size_t best = 0;
  for (std::size_t i = 1; i < ds.size(); ++i)
    if (std::pair(ds[i].cost, io_count(p, ds[i])) < std::pair(ds[best].cost, io_count(p, ds[best])))
      best = i;
  return ds[best];
}

std::vector<Lit> soft_lits(const DiagnosisProblem& p) {
  std::vector<Lit> out;
  for (const auto& s : p.unified.soft) out.push_back(s.lits[0]);
  return out;
}

void require_consistent_hard(const DiagnosisProblem& p, EngineStats& st,
                             const formula::MaxSatOptions& o) {
  auto oracle = o.oracle();
  oracle->set_deadline(o.deadline);
  oracle->add_formula(p.unified.hard);
  ++st.oracle_calls;
  if (!oracle->solve().sat())
    throw NoDiagnosisError("no set of components explains the observations");
}

// MCSes of every observation, each as ascending soft indices.
std::vector<std::vector<Indices>> per_observation_mcses(const DiagnosisProblem& p,
                                                        const EngineOptions& o,
                                                        EngineStats& st) {
  const auto lits = soft_lits(p);
  std::vector<std::vector<Indices>> out;
  for (const auto& w : p.per_observation) {
    formula::MaxSatStats ms;
    formula::EnumerationOptions eo{o.maxsat, o.enum_budget};
    try {
      out.push_back(formula::enumerate_mcses(w.hard, lits, eo, &ms));
    } catch (const BudgetExceededError& e) {
      throw EngineBudgetExceeded(e.what(), st);
    }
    st.oracle_calls += ms.oracle_calls;
    st.cores += ms.cores;
    st.peak_enumeration = std::max<std::uint64_t>(st.peak_enumeration, out.back().size());
  }
  return out;
}

}  // namespace

EngineReport cfaults_localize(const DiagnosisProblem& p, const EngineOptions& o) {
  EngineReport r;
  r.engine = "cfaults";
  formula::MaxSatStats ms;
  std::vector<Indices> sets;
  try {
    sets = formula::enumerate_optimal_solutions(p.unified, {o.maxsat, o.enum_budget}, &ms);
  } catch (const BudgetExceededError& e) {
    throw EngineBudgetExceeded(e.what(), r.stats);
  }
  for (const Indices& s : sets) r.diagnoses.push_back(from_indices(p, s));
  r.selected = preferred(p, r.diagnoses);
  r.stats.oracle_calls = ms.oracle_calls;
  r.stats.cores = ms.cores;
  r.stats.iterations = sets.size();
  r.stats.peak_enumeration = sets.size();
  return r;
}

EngineReport hsd_localize(const DiagnosisProblem& p, const EngineOptions& o) {
  EngineReport r;
  r.engine = o.core_minimize ? "hsd-cm" : "hsd";
  require_consistent_hard(p, r.stats, o.maxsat);
  std::vector<Weight> weights;
  for (const auto& s : p.unified.soft) weights.push_back(s.weight);
  formula::HittingSetSolver hs(p.components(), weights, o.maxsat);

  std::vector<std::unique_ptr<formula::SatOracle>> oracles;
  for (const auto& w : p.per_observation) {
    oracles.push_back(o.maxsat.oracle());
    oracles.back()->set_deadline(o.maxsat.deadline);
    oracles.back()->add_formula(w.hard);
  }

  std::optional<Weight> best;
  for (;;) {
    o.maxsat.deadline.check();
    auto h = hs.solve();
    ++r.stats.iterations;
    if (!h) break;
    Diagnosis d = make_diagnosis(p, *h);
    if (o.early_exit && best && d.cost > *best) break;
    std::set<std::string> off(h->begin(), h->end());
    std::vector<Lit> as;
    for (const std::string& c : p.components()) {
      Lit l = Lit::pos(p.health.at(c));
      as.push_back(off.count(c) ? ~l : l);
    }
    bool consistent = true;
    for (auto& oracle : oracles) {
      auto out = oracle->solve(as);
      if (out.sat()) continue;
      std::vector<Lit> core = out.core;
      if (o.core_minimize) core = formula::minimize_core(*oracle, core);
      // Keep one of the active components in the core switched off, or
      // switch back on one of the deactivated ones.
      std::vector<std::string> pick, drop;
      for (Lit l : core) {
        std::string c = *p.health.component_of(l.var());
        (l.negated() ? drop : pick).push_back(c);
      }
      hs.add_clause(pick, drop);
      ++r.stats.cores;
      consistent = false;
      break;
    }
    if (!consistent) continue;
    r.diagnoses.push_back(d);
    if (!best) best = d.cost;
    hs.block(*h);
  }
  for (const auto& oracle : oracles) r.stats.oracle_calls += oracle->calls();
  r.stats.oracle_calls += hs.stats().oracle_calls;
  r.stats.peak_enumeration = r.diagnoses.size();
  if (!r.diagnoses.empty()) r.selected = preferred(p, r.diagnoses);
  return r;
}

EngineReport bugassist_localize(const DiagnosisProblem& p, const EngineOptions& o) {
  EngineReport r;
  r.engine = "bugassist";
  require_consistent_hard(p, r.stats, o.maxsat);
  auto per_obs = per_observation_mcses(p, o, r.stats);

  struct Entry {
    Indices set;
    std::size_t frequency = 0;
  };
  std::vector<Entry> ranked;
  std::map<Indices, std::size_t> where;
  for (const auto& mcses : per_obs)
    for (const Indices& m : mcses) {
      auto [it, fresh] = where.try_emplace(m, ranked.size());
      if (fresh) ranked.push_back({m, 0});
      ++ranked[it->second].frequency;
    }
  std::stable_sort(ranked.begin(), ranked.end(), [](const Entry& a, const Entry& b) {
    if (a.frequency != b.frequency) return a.frequency > b.frequency;
    return a.set.size() < b.set.size();
  });
  if (ranked.empty()) ranked.push_back({});  // every observation already passes
  for (const Entry& e : ranked) r.candidates.push_back(from_indices(p, e.set));
  r.stats.peak_enumeration = r.candidates.size();
  for (const Diagnosis& d : r.candidates) {
    ++r.stats.iterations;
    ++r.stats.oracle_calls;
    if (validate_diagnosis(p, d, o.maxsat.deadline)) {
      r.selected = d;
      r.diagnoses = {d};
      return r;
    }
  }
  throw NoDiagnosisError("no ranked MCS is consistent with every observation");
}

EngineReport sniper_localize(const DiagnosisProblem& p, const EngineOptions& o) {
  EngineReport r;
  r.engine = "sniper";
  require_consistent_hard(p, r.stats, o.maxsat);
  auto per_obs = per_observation_mcses(p, o, r.stats);
  auto cost = [&](const Indices& s) {
    Weight w = 0;
    for (std::size_t i : s) w += p.unified.soft[i].weight;
    return w;
  };

  struct Union {
    Indices set;
    Weight parts = 0;  // summed cost of the per-observation MCSes
  };
  std::vector<Union> current(1);
  for (const auto& mcses : per_obs) {
    if (mcses.empty()) continue;  // observation passes as is
    std::vector<Union> next;
    std::map<Indices, std::size_t> where;
    for (const Union& u : current)
      for (const Indices& m : mcses) {
        o.maxsat.deadline.check();
        Indices merged;
        std::set_union(u.set.begin(), u.set.end(), m.begin(), m.end(),
                       std::back_inserter(merged));
        Weight parts = u.parts + cost(m);
        auto [it, fresh] = where.try_emplace(merged, next.size());
        if (fresh) {
          next.push_back({std::move(merged), parts});
          if (next.size() > o.enum_budget) {
            r.stats.peak_enumeration = next.size();
            throw EngineBudgetExceeded("SNIPER exceeded " + std::to_string(o.enum_budget) +
                                           " unique diagnoses",
                                       r.stats);
          }
        } else {
          next[it->second].parts = std::min(next[it->second].parts, parts);
        }
      }
    current = std::move(next);
    ++r.stats.iterations;
    r.stats.peak_enumeration = std::max<std::uint64_t>(r.stats.peak_enumeration, current.size());
  }
  std::vector<std::size_t> io(current.size(), 0), order(current.size());
  for (std::size_t i = 0; i < current.size(); ++i) {
    r.diagnoses.push_back(from_indices(p, current[i].set));
    io[i] = io_count(p, r.diagnoses[i]);
    order[i] = i;
  }
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return std::tuple(r.diagnoses[a].cost, io[a], current[a].parts) <
           std::tuple(r.diagnoses[b].cost, io[b], current[b].parts);
  });
  // Program relaxation is not monotone, so a union may fail to validate.
  for (std::size_t i : order) {
    ++r.stats.oracle_calls;
    if (validate_diagnosis(p, r.diagnoses[i], o.maxsat.deadline)) {
      r.selected = r.diagnoses[i];
      return r;
    }
  }
  throw NoDiagnosisError("no SNIPER union is consistent with every observation");
}

EngineReport run_engine(Engine e, const DiagnosisProblem& p, EngineOptions o) {
  auto start = std::chrono::steady_clock::now();
  EngineReport r;
  switch (e) {
    case Engine::kCFaults: r = cfaults_localize(p, o); break;
    case Engine::kHsd: r = hsd_localize(p, o); break;
    case Engine::kHsdCoreMinimize:
      o.core_minimize = true;
      r = hsd_localize(p, o);
      break;
    case Engine::kBugAssist: r = bugassist_localize(p, o); break;
    case Engine::kSniper: r = sniper_localize(p, o); break;
  }
  r.stats.wall_time_s =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return r;
}

namespace {

nlohmann::json to_json(const Diagnosis& d, const DiagnosisProblem& p) {
  std::vector<std::string> comps = d.components;
  std::sort(comps.begin(), comps.end());
  nlohmann::json j{{"components", comps}, {"cost", d.cost}};
  if (!p.component_lines.empty()) j["lines"] = lines_of(p, d);
  return j;
}

}  // namespace

std::string report_to_json(const EngineReport& r, const DiagnosisProblem& p, bool timing) {
  nlohmann::json j;
  j["engine"] = r.engine;
  j["selected"] = r.selected ? to_json(*r.selected, p) : nlohmann::json(nullptr);
  j["diagnoses"] = nlohmann::json::array();
  for (const Diagnosis& d : r.diagnoses) j["diagnoses"].push_back(to_json(d, p));
  if (!r.candidates.empty()) {
    j["candidates"] = nlohmann::json::array();
    for (const Diagnosis& d : r.candidates) j["candidates"].push_back(to_json(d, p));
  }
  nlohmann::json st{{"oracle_calls", r.stats.oracle_calls},
                    {"cores", r.stats.cores},
                    {"iterations", r.stats.iterations},
                    {"peak_enumeration", r.stats.peak_enumeration},
                    {"num_diagnoses", r.diagnoses.size()}};
  if (timing) st["wall_time_s"] = r.stats.wall_time_s;
  j["stats"] = st;
  return j.dump(2);
}

}  // namespace faultloc::engines
