// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "faultloc/engines/problem.hpp"
#include "faultloc/error.hpp"
#include "faultloc/formula/maxsat.hpp"

namespace faultloc::engines {

enum class Engine { kCFaults, kHsd, kHsdCoreMinimize, kBugAssist, kSniper };

std::string_view to_string(Engine e);
/// cfaults, hsd, hsd-cm, bugassist, sniper. Throws PreconditionError.
Engine parse_engine(std::string_view name);
const std::vector<Engine>& all_engines();

struct EngineOptions {
  formula::MaxSatOptions maxsat;
  /// Cap on enumerated diagnoses (SNIPER products, CFaults optima).
  std::size_t enum_budget = 1'000'000;
  /// HSD: reduce each core to a MUS before adding it.
  bool core_minimize = false;
  /// HSD: stop once every minimum-cost diagnosis has been found.
  bool early_exit = false;
};

struct EngineStats {
  std::uint64_t oracle_calls = 0;
  std::uint64_t cores = 0;
  std::uint64_t iterations = 0;
  std::uint64_t peak_enumeration = 0;
  double wall_time_s = 0;
};

struct EngineReport {
  std::string engine;
  std::vector<Diagnosis> diagnoses;
  std::optional<Diagnosis> selected;
  /// BugAssist only: the ranked per-observation MCSes, not all consistent
  /// with every observation.
  std::vector<Diagnosis> candidates;
  EngineStats stats;
};

/// An enumeration budget ran out; carries the statistics gathered so far.
class EngineBudgetExceeded : public BudgetExceededError {
 public:
  EngineBudgetExceeded(const std::string& what, EngineStats stats)
      : BudgetExceededError(what), stats_(stats) {}
  const EngineStats& stats() const noexcept { return stats_; }

 private:
  EngineStats stats_;
};

/// All minimum-cost aggregated diagnoses of the unified formula; selected
/// is the one with the fewest I/O components, first found on ties. Throws NoDiagnosisError, BudgetExceededError,
/// TimeoutError.
EngineReport cfaults_localize(const DiagnosisProblem& p, const EngineOptions& o = {});

/// Implicit hitting-set dualisation: every subset-minimal aggregated
/// diagnosis, in non-decreasing cost. Candidates are checked observation by
/// observation; failures contribute their assumption core. selected is a
/// minimum-cost diagnosis chosen as in cfaults_localize.
EngineReport hsd_localize(const DiagnosisProblem& p, const EngineOptions& o = {});

/// MCSes per observation ranked by descending frequency, then ascending
/// size, then discovery order, kept in candidates. selected = first ranked
/// MCS that validates, and it is the only entry of diagnoses;
/// NoDiagnosisError when none does.
EngineReport bugassist_localize(const DiagnosisProblem& p, const EngineOptions& o = {});

/// Unions over the Cartesian product of per-observation MCS sets,
/// deduplicated. selected = the cheapest union that validates; ties go to
/// fewer I/O components, then to the smallest summed cost of the
/// per-observation parts, then to the first one produced. NoDiagnosisError
/// when no union validates; EngineBudgetExceeded past o.enum_budget unions.
EngineReport sniper_localize(const DiagnosisProblem& p, const EngineOptions& o = {});

EngineReport run_engine(Engine e, const DiagnosisProblem& p, EngineOptions o = {});

/// Diagnoses as sorted component arrays (plus line arrays for programs).
/// Wall time is included only when `timing` is set, so output is
/// reproducible by default.
std::string report_to_json(const EngineReport& r, const DiagnosisProblem& p,
                           bool timing = false);

}  // namespace faultloc::engines
