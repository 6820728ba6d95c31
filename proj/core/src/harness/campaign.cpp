// SPDX-License-Identifier: Apache-2.0
#include "faultloc/harness/campaign.hpp"

#include <algorithm>
#include <atomic>
#include <charconv>
#include <chrono>
#include <fstream>
#include <map>
#include <mutex>
#include <sstream>
#include <thread>

#include <nlohmann/json.hpp>

#include "faultloc/circuit/circuit.hpp"
#include "faultloc/circuit/encode.hpp"
#include "faultloc/circuit/faults.hpp"
#include "faultloc/error.hpp"

namespace faultloc::harness {

namespace fs = std::filesystem;

namespace {

std::string read_file(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  if (!in) throw PreconditionError("cannot read " + p.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file(const fs::path& p, const std::string& text) {
  std::ofstream out(p, std::ios::binary);
  if (!out) throw PreconditionError("cannot write " + p.string());
  out << text;
}

std::string format_double(double v) {
  char buf[64];
  auto [end, ec] = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, end);
}

std::vector<std::string> split(std::string_view line, char sep) {
  std::vector<std::string> out;
  std::size_t start = 0;
  for (;;) {
    std::size_t pos = line.find(sep, start);
    out.emplace_back(line.substr(start, pos - start));
    if (pos == std::string_view::npos) return out;
    start = pos + 1;
  }
}

template <typename T>
T parse_number(const std::string& s, int line) {
  T v{};
  auto [end, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || end != s.data() + s.size())
    throw ParseError("bad number '" + s + "'", line);
  return v;
}

std::string instance_name(const fs::path& circuit, int faults, int obs, std::uint64_t seed) {
  return circuit.stem().string() + "_f" + std::to_string(faults) + "_o" + std::to_string(obs) +
         "_s" + std::to_string(seed);
}

}  // namespace

void CampaignConfig::check() const {
  if (circuits.empty()) throw PreconditionError("campaign: no circuits");
  if (fault_counts.empty() || observation_counts.empty() || seeds.empty() || engines.empty())
    throw PreconditionError("campaign: empty fault, observation, seed or engine list");
  for (int f : fault_counts)
    if (f < 1) throw PreconditionError("campaign: fault counts must be >= 1");
  for (int o : observation_counts)
    if (o < 1) throw PreconditionError("campaign: observation counts must be >= 1");
  if (!(time_budget_s > 0)) throw PreconditionError("campaign: time budget must be > 0");
  if (enum_budget == 0) throw PreconditionError("campaign: enumeration budget must be > 0");
  if (max_draws == 0) throw PreconditionError("campaign: max draws must be > 0");
}

std::vector<GeneratedInstance> generate_campaign(const CampaignConfig& cfg, const fs::path& dir) {
  cfg.check();
  std::vector<GeneratedInstance> out;
  for (const fs::path& path : cfg.circuits) {
    const circuit::Circuit golden = circuit::parse_bench(read_file(path), path.stem().string());
    for (int faults : cfg.fault_counts)
      for (int obs : cfg.observation_counts)
        for (std::uint64_t seed : cfg.seeds) {
          GeneratedInstance g;
          g.name = instance_name(path, faults, obs, seed);
          const circuit::FaultyCircuit faulty = circuit::inject_faults(golden, faults, seed);
          const auto observations = circuit::generate_observations(
              golden, faulty.circuit, static_cast<std::size_t>(obs), seed + 1, cfg.max_draws);
          g.observations = observations.size();
          g.skipped = observations.empty();

          const fs::path idir = dir / "instances" / g.name;
          fs::create_directories(idir);
          write_file(idir / "circuit.bench", circuit::render_bench(faulty.circuit));
          if (!g.skipped) write_file(idir / "obs.json", circuit::observations_to_json(observations));
          nlohmann::json m;
          m["circuit"] = golden.name;
          m["seed"] = seed;
          m["requested_observations"] = obs;
          m["observations"] = observations.size();
          m["skipped"] = g.skipped;
          m["faults"] = nlohmann::json::array();
          for (const circuit::Fault& f : faulty.faults)
            m["faults"].push_back({{"gate", f.gate},
                                   {"from", std::string(circuit::to_string(f.from))},
                                   {"to", std::string(circuit::to_string(f.to))}});
          write_file(idir / "manifest.json", m.dump(2) + "\n");
          out.push_back(std::move(g));
        }
  }
  return out;
}

std::string_view to_string(Status s) {
  switch (s) {
    case Status::kValidDiagnosis: return "valid-diagnosis";
    case Status::kTimeout: return "timeout";
    case Status::kMemout: return "memout";
    case Status::kNoObservations: return "no-observations";
    case Status::kNoDiagnosis: return "no-diagnosis";
  }
  return "?";
}

Status parse_status(std::string_view s) {
  for (Status st : {Status::kValidDiagnosis, Status::kTimeout, Status::kMemout,
                    Status::kNoObservations, Status::kNoDiagnosis})
    if (to_string(st) == s) return st;
  throw ParseError("unknown status '" + std::string(s) + "'");
}

std::string render_results_csv(const std::vector<InstanceResult>& rows) {
  std::string out(kResultsHeader);
  out += '\n';
  for (const InstanceResult& r : rows) {
    if (r.instance.find_first_of(",\n") != std::string::npos)
      throw PreconditionError("instance name contains a separator: " + r.instance);
    out += r.instance + ',' + r.engine + ',' + std::string(to_string(r.status)) + ',' +
           format_double(r.time_s) + ',' + (r.cost ? std::to_string(*r.cost) : "") + ',' +
           std::to_string(r.num_diagnoses) + ',' + std::to_string(r.iterations) + '\n';
  }
  return out;
}

std::vector<InstanceResult> parse_results_csv(std::string_view text) {
  std::vector<InstanceResult> rows;
  std::istringstream in{std::string(text)};
  std::string line;
  if (!std::getline(in, line) || line != kResultsHeader)
    throw ParseError("results CSV: bad header", 1);
  int lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    auto f = split(line, ',');
    if (f.size() != 7) throw ParseError("results CSV: expected 7 fields", lineno);
    InstanceResult r;
    r.instance = f[0];
    r.engine = f[1];
    r.status = parse_status(f[2]);
    r.time_s = parse_number<double>(f[3], lineno);
    if (!f[4].empty()) r.cost = parse_number<formula::Weight>(f[4], lineno);
    r.num_diagnoses = parse_number<std::uint64_t>(f[5], lineno);
    r.iterations = parse_number<std::uint64_t>(f[6], lineno);
    rows.push_back(std::move(r));
  }
  return rows;
}

std::string render_cactus_csv(const std::vector<InstanceResult>& rows) {
  std::map<std::string, std::vector<double>> times;
  for (const InstanceResult& r : rows)
    if (r.status == Status::kValidDiagnosis) times[r.engine].push_back(r.time_s);
  std::string out = "engine,rank,time_s,cumulative_s\n";
  for (auto& [engine, ts] : times) {
    std::sort(ts.begin(), ts.end());
    double total = 0;
    for (std::size_t i = 0; i < ts.size(); ++i) {
      total += ts[i];
      out += engine + ',' + std::to_string(i + 1) + ',' + format_double(ts[i]) + ',' +
             format_double(total) + '\n';
    }
  }
  return out;
}

std::string render_scatter_csv(const std::vector<InstanceResult>& rows,
                               const std::vector<std::string>& engine_order) {
  std::map<std::string, std::map<std::string, const InstanceResult*>> by_instance;
  for (const InstanceResult& r : rows) by_instance[r.instance][r.engine] = &r;
  std::string out = "instance,engine_x,engine_y,time_x,time_y,status_x,status_y\n";
  for (const auto& [name, runs] : by_instance)
    for (std::size_t i = 0; i < engine_order.size(); ++i)
      for (std::size_t j = i + 1; j < engine_order.size(); ++j) {
        auto x = runs.find(engine_order[i]);
        auto y = runs.find(engine_order[j]);
        if (x == runs.end() || y == runs.end()) continue;
        out += name + ',' + engine_order[i] + ',' + engine_order[j] + ',' +
               format_double(x->second->time_s) + ',' + format_double(y->second->time_s) + ',' +
               std::string(to_string(x->second->status)) + ',' +
               std::string(to_string(y->second->status)) + '\n';
      }
  return out;
}

InstanceResult run_instance(const fs::path& instance_dir, engines::Engine e,
                            const CampaignConfig& cfg) {
  InstanceResult r;
  r.instance = instance_dir.filename().string();
  r.engine = std::string(engines::to_string(e));
  const fs::path bench = instance_dir / "circuit.bench";
  const fs::path manifest = instance_dir / "manifest.json";
  if (!fs::exists(bench) || !fs::exists(manifest))
    throw PreconditionError("instance " + r.instance + " lacks circuit.bench or manifest.json");
  const fs::path obs_path = instance_dir / "obs.json";
  if (!fs::exists(obs_path)) {
    r.status = Status::kNoObservations;
    return r;
  }

  const auto start = std::chrono::steady_clock::now();
  auto elapsed = [&] {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  };
  engines::EngineOptions o;
  o.enum_budget = cfg.enum_budget;
  o.maxsat.deadline = Deadline::after(std::chrono::duration<double>(cfg.time_budget_s));
  try {
    const circuit::Circuit c = circuit::parse_bench(read_file(bench), r.instance);
    const auto obs = circuit::parse_observations(read_file(obs_path), c);
    if (obs.empty()) {
      r.status = Status::kNoObservations;
      return r;
    }
    const engines::DiagnosisProblem p =
        engines::from_circuit(circuit::encode_instrumented(c, obs));
    const engines::EngineReport rep = engines::run_engine(e, p, o);
    r.num_diagnoses = rep.diagnoses.size();
    r.iterations = rep.stats.iterations;
    if (rep.selected && engines::validate_diagnosis(p, *rep.selected, o.maxsat.deadline)) {
      r.status = Status::kValidDiagnosis;
      r.cost = rep.selected->cost;
    } else {
      r.status = Status::kNoDiagnosis;
    }
  } catch (const engines::EngineBudgetExceeded& ex) {
    r.status = Status::kMemout;
    r.num_diagnoses = ex.stats().peak_enumeration;
    r.iterations = ex.stats().iterations;
  } catch (const BudgetExceededError&) {
    r.status = Status::kMemout;
  } catch (const TimeoutError&) {
    r.status = Status::kTimeout;
  } catch (const NoDiagnosisError&) {
    r.status = Status::kNoDiagnosis;
  }
  r.time_s = elapsed();
  return r;
}

std::vector<InstanceResult> run_campaign(const fs::path& dir, const CampaignConfig& cfg,
                                         const fs::path& out) {
  if (cfg.engines.empty()) throw PreconditionError("campaign: no engines");
  if (!(cfg.time_budget_s > 0)) throw PreconditionError("campaign: time budget must be > 0");
  std::vector<fs::path> instances;
  const fs::path root = dir / "instances";
  if (fs::exists(root))
    for (const auto& entry : fs::directory_iterator(root))
      if (entry.is_directory()) instances.push_back(entry.path());
  std::sort(instances.begin(), instances.end());
  for (const fs::path& i : instances)
    if (!fs::exists(i / "circuit.bench") || !fs::exists(i / "manifest.json"))
      throw PreconditionError("instance " + i.filename().string() +
                              " lacks circuit.bench or manifest.json");

  const std::size_t n_engines = cfg.engines.size();
  std::vector<InstanceResult> rows(instances.size() * n_engines);
  std::atomic<std::size_t> next{0};
  std::atomic<bool> failed{false};
  std::exception_ptr error;
  std::mutex error_mu;
  auto worker = [&] {
    for (std::size_t job; (job = next++) < rows.size() && !failed;) {
      try {
        rows[job] = run_instance(instances[job / n_engines], cfg.engines[job % n_engines], cfg);
      } catch (...) {
        std::lock_guard lock(error_mu);
        if (!error) error = std::current_exception();
        failed = true;
      }
    }
  };
  unsigned threads = cfg.threads ? cfg.threads : std::max(1u, std::thread::hardware_concurrency());
  threads = static_cast<unsigned>(std::min<std::size_t>(threads, std::max<std::size_t>(1, rows.size())));
  {
    std::vector<std::jthread> pool;
    for (unsigned t = 0; t < threads; ++t) pool.emplace_back(worker);
  }
  if (error) std::rethrow_exception(error);

  std::vector<std::string> order;
  for (engines::Engine e : cfg.engines) order.emplace_back(engines::to_string(e));
  const fs::path target = out.empty() ? dir : out;
  fs::create_directories(target);
  write_file(target / "results.csv", render_results_csv(rows));
  write_file(target / "cactus.csv", render_cactus_csv(rows));
  write_file(target / "scatter.csv", render_scatter_csv(rows, order));
  return rows;
}

}  // namespace faultloc::harness
