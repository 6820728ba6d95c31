// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "faultloc/engines/engines.hpp"

namespace faultloc::harness {

/// Fault-injection campaign over BENCH circuits. Circuit campaigns are
/// unweighted: every gate costs 1.
struct CampaignConfig {
  std::vector<std::filesystem::path> circuits;
  std::vector<int> fault_counts{1};
  std::vector<int> observation_counts{10};
  std::vector<std::uint64_t> seeds{1};
  double time_budget_s = 60.0;
  std::uint64_t enum_budget = 1'000'000;
  std::vector<engines::Engine> engines = engines::all_engines();
  /// Worker threads for run_campaign; 0 means hardware concurrency.
  unsigned threads = 1;
  /// Rejection-sampling cap per instance.
  std::size_t max_draws = 100'000;

  /// Throws PreconditionError on empty lists, non-positive budgets or
  /// fault/observation counts below 1.
  void check() const;
};

struct GeneratedInstance {
  std::string name;
  bool skipped = false;  // no distinguishing input was found
  std::size_t observations = 0;
};

/// Writes instances/<name>/{circuit.bench, obs.json, manifest.json} under
/// `dir`, one per (circuit, fault count, observation count, seed). Skipped
/// instances get a manifest and the faulty circuit but no obs.json.
/// Deterministic under the configured seeds.
std::vector<GeneratedInstance> generate_campaign(const CampaignConfig& cfg,
                                                 const std::filesystem::path& dir);

enum class Status { kValidDiagnosis, kTimeout, kMemout, kNoObservations, kNoDiagnosis };

std::string_view to_string(Status s);
/// Throws ParseError on unknown names.
Status parse_status(std::string_view s);

struct InstanceResult {
  std::string instance;
  std::string engine;
  Status status = Status::kValidDiagnosis;
  double time_s = 0;
  /// Selected diagnosis cost; absent unless status is kValidDiagnosis.
  std::optional<formula::Weight> cost;
  std::uint64_t num_diagnoses = 0;
  std::uint64_t iterations = 0;

  friend bool operator==(const InstanceResult&, const InstanceResult&) = default;
};

inline constexpr std::string_view kResultsHeader =
    "instance,engine,status,time_s,cost,num_diagnoses,iterations";

/// One row per result under kResultsHeader. Times use the shortest
/// round-trip representation.
std::string render_results_csv(const std::vector<InstanceResult>& rows);
/// Inverse of render_results_csv. Throws ParseError on a bad header or row.
std::vector<InstanceResult> parse_results_csv(std::string_view text);

/// engine,rank,time_s,cumulative_s over valid-diagnosis rows, fastest first.
std::string render_cactus_csv(const std::vector<InstanceResult>& rows);
/// instance,engine_x,engine_y,time_x,time_y,status_x,status_y for every
/// engine pair (config order) that ran on the same instance.
std::string render_scatter_csv(const std::vector<InstanceResult>& rows,
                               const std::vector<std::string>& engine_order);

/// Runs one engine on one instance directory under the configured budgets.
InstanceResult run_instance(const std::filesystem::path& instance_dir, engines::Engine e,
                            const CampaignConfig& cfg);

/// Runs every configured engine on every instance in dir/instances (sorted
/// by name) using a worker pool, then writes results.csv, cactus.csv and
/// scatter.csv into `out` (default: `dir`). Rows are ordered by instance,
/// then engine in config order. Throws PreconditionError when an instance
/// lacks circuit.bench or manifest.json.
std::vector<InstanceResult> run_campaign(const std::filesystem::path& dir,
                                         const CampaignConfig& cfg,
                                         const std::filesystem::path& out = {});

}  // namespace faultloc::harness
