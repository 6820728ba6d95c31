// SPDX-License-Identifier: Apache-2.0
#include "cli.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <set>
#include <sstream>

#include <nlohmann/json.hpp>

#include "faultloc/circuit/circuit.hpp"
#include "faultloc/circuit/encode.hpp"
#include "faultloc/circuit/faults.hpp"
#include "faultloc/engines/engines.hpp"
#include "faultloc/error.hpp"
#include "faultloc/formula/dimacs.hpp"
#include "faultloc/harness/campaign.hpp"
#include "faultloc/minilang/compile.hpp"
#include "faultloc/minilang/parser.hpp"
#include "faultloc/minilang/test_case.hpp"

namespace faultloc::cli {

namespace fs = std::filesystem;

namespace {

/// Input failure that carries the offending path.
class InputError : public Error {
 public:
  using Error::Error;
};

std::string read_file(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  if (!in) throw InputError(p.string() + ": cannot read file");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file(const fs::path& p, const std::string& text) {
  std::ofstream out(p, std::ios::binary);
  if (!out) throw InputError(p.string() + ": cannot write file");
  out << text;
}

/// Re-raises a ParseError with the file name in front.
template <typename F>
auto parsing(const fs::path& path, F&& f) {
  try {
    return f();
  } catch (const ParseError& e) {
    throw InputError(path.string() + ": " + e.what());
  }
}

struct Flags {
  std::vector<std::string> inputs;
  std::string engine = "cfaults";
  int unwind = 8;
  int bitwidth = 16;
  std::string weights = "hierarchical";
  formula::Weight io_penalty = 1000;
  std::uint64_t seed = 1;
  double time_budget = 0;
  std::size_t enum_budget = 1'000'000;
  bool core_minimize = false;
  bool early_exit = false;
  bool timing = false;
  std::string output;
};

void add_pipeline_flags(CLI::App* cmd, Flags& f) {
  cmd->add_option("--unwind", f.unwind, "Loop unwinding bound")->check(CLI::PositiveNumber);
  cmd->add_option("--bitwidth", f.bitwidth, "Integer width")->check(CLI::IsMember({8, 16, 32}));
  cmd->add_option("--weights", f.weights, "Soft-clause weights")
      ->check(CLI::IsMember({"flat", "hierarchical", "height"}));
  cmd->add_option("--io-penalty", f.io_penalty, "Weight of read/print statements")
      ->check(CLI::PositiveNumber);
}

void add_engine_flags(CLI::App* cmd, Flags& f) {
  cmd->add_option("--engine", f.engine, "cfaults, hsd, hsd-cm, bugassist or sniper")
      ->check(CLI::IsMember({"cfaults", "hsd", "hsd-cm", "bugassist", "sniper"}));
  cmd->add_option("--time-budget", f.time_budget, "Wall-clock budget in seconds")
      ->check(CLI::NonNegativeNumber);
  cmd->add_option("--enum-budget", f.enum_budget, "Cap on enumerated diagnoses")
      ->check(CLI::PositiveNumber);
  cmd->add_flag("--core-minimize", f.core_minimize, "HSD: minimise cores before use");
  cmd->add_flag("--early-exit", f.early_exit, "HSD: stop after the minimum-cost diagnoses");
  cmd->add_flag("--timing", f.timing, "Include wall time in the report");
}

minilang::PipelineOptions pipeline_options(const Flags& f) {
  minilang::PipelineOptions o;
  o.unwind = f.unwind;
  o.bitwidth = f.bitwidth;
  o.weights = minilang::parse_weight_mode(f.weights);
  o.io_penalty = f.io_penalty;
  return o;
}

engines::EngineOptions engine_options(const Flags& f) {
  engines::EngineOptions o;
  o.enum_budget = f.enum_budget;
  o.core_minimize = f.core_minimize;
  o.early_exit = f.early_exit;
  if (f.time_budget > 0)
    o.maxsat.deadline = Deadline::after(std::chrono::duration<double>(f.time_budget));
  return o;
}

bool has_ext(const std::string& path, std::string_view ext) {
  return fs::path(path).extension() == ext;
}

fs::path sidecar_of(const fs::path& wcnf) {
  fs::path p = wcnf;
  return p.replace_extension(".map.json");
}

struct Loaded {
  engines::DiagnosisProblem problem;
  std::size_t observations = 0;
};

/// program.mc + tests.json, circuit.bench + obs.json, or model.wcnf (with
/// its .map.json sidecar when present).
Loaded load(const Flags& f) {
  Loaded l;
  const auto& in = f.inputs;
  if (in.size() == 1 && has_ext(in[0], ".wcnf")) {
    auto w = parsing(in[0], [&] { return formula::parse_wcnf(read_file(in[0])); });
    std::vector<std::string> names;
    const fs::path side = sidecar_of(in[0]);
    if (fs::exists(side)) {
      auto j = parsing(side, [&] {
        try {
          return nlohmann::json::parse(read_file(side));
        } catch (const nlohmann::json::exception& e) {
          throw ParseError(e.what());
        }
      });
      for (const auto& s : j.at("soft")) names.push_back(s.at("component").get<std::string>());
    }
    l.problem = engines::from_wcnf(w, names);
    l.observations = 1;
    return l;
  }
  if (in.size() != 2)
    throw InputError("expected <program.mc> <tests.json>, <circuit.bench> <obs.json> or <model.wcnf>");
  if (has_ext(in[0], ".mc")) {
    auto prog = parsing(in[0], [&] { return minilang::parse_program(read_file(in[0])); });
    auto tests = parsing(in[1], [&] { return minilang::parse_tests(read_file(in[1])); });
    auto opts = pipeline_options(f);
    auto tf = minilang::build_trace_formula(prog, tests, opts);
    minilang::check_trace_formula(tf, prog, tests, opts);
    l.problem = engines::from_trace(tf);
    l.observations = tests.size();
    return l;
  }
  if (has_ext(in[0], ".bench")) {
    auto c = parsing(in[0], [&] {
      return circuit::parse_bench(read_file(in[0]), fs::path(in[0]).stem().string());
    });
    auto obs = parsing(in[1], [&] { return circuit::parse_observations(read_file(in[1]), c); });
    l.problem = engines::from_circuit(circuit::encode_instrumented(c, obs));
    l.observations = obs.size();
    return l;
  }
  throw InputError(in[0] + ": unknown input kind (expected .mc, .bench or .wcnf)");
}

void emit(const Flags& f, std::ostream& out, const std::string& json) {
  if (f.output.empty())
    out << json << "\n";
  else
    write_file(f.output, json + "\n");
}

std::string stats_json(const std::string& engine, const std::string& status,
                       const engines::EngineStats& st, const std::string& message) {
  nlohmann::json j{{"engine", engine},
                   {"status", status},
                   {"message", message},
                   {"stats",
                    {{"oracle_calls", st.oracle_calls},
                     {"cores", st.cores},
                     {"iterations", st.iterations},
                     {"peak_enumeration", st.peak_enumeration}}}};
  return j.dump(2);
}

int cmd_localize(const Flags& f, std::ostream& out, std::ostream& err) {
  Loaded l = load(f);
  engines::Engine e = engines::parse_engine(f.engine);
  if (e == engines::Engine::kHsd && f.core_minimize) e = engines::Engine::kHsdCoreMinimize;
  err << "localize: " << l.problem.components().size() << " components, " << l.observations
      << " observations, engine " << engines::to_string(e) << "\n";
  try {
    auto report = engines::run_engine(e, l.problem, engine_options(f));
    emit(f, out, engines::report_to_json(report, l.problem, f.timing));
    return kOk;
  } catch (const engines::EngineBudgetExceeded& ex) {
    emit(f, out, stats_json(std::string(engines::to_string(e)), "budget-exceeded", ex.stats(),
                            ex.what()));
    err << "error: " << ex.what() << "\n";
    return kBudget;
  }
}

int cmd_validate(const Flags& f, const std::vector<std::string>& components,
                 const std::vector<int>& lines, std::ostream& out) {
  Loaded l = load(f);
  std::vector<std::string> comps = components;
  const std::set<int> wanted(lines.begin(), lines.end());
  for (const auto& [c, line] : l.problem.component_lines)
    if (wanted.count(line)) comps.push_back(c);
  for (const std::string& c : comps)
    if (!l.problem.health.var_of(c)) throw InputError("unknown component '" + c + "'");
  auto d = engines::make_diagnosis(l.problem, comps);
  const bool ok = engines::validate_diagnosis(l.problem, d, engine_options(f).maxsat.deadline);
  auto sorted = d.components;
  std::sort(sorted.begin(), sorted.end());
  nlohmann::json j{{"valid", ok}, {"components", sorted}, {"cost", d.cost}};
  if (!l.problem.component_lines.empty()) j["lines"] = engines::lines_of(l.problem, d);
  emit(f, out, j.dump(2));
  return ok ? kOk : kNoDiagnosis;
}

int cmd_export(const Flags& f, std::ostream& out) {
  if (f.output.empty()) throw InputError("export-wcnf needs -o <file.wcnf>");
  Loaded l = load(f);
  const auto& p = l.problem;
  write_file(f.output, formula::write_wcnf(p.unified));
  nlohmann::json side;
  side["observations"] = l.observations;
  side["soft"] = nlohmann::json::array();
  for (std::size_t i = 0; i < p.components().size(); ++i) {
    const std::string& c = p.components()[i];
    nlohmann::json s{{"var", p.health.at(c)}, {"component", c}, {"weight", p.weight_of(c)}};
    if (auto it = p.component_lines.find(c); it != p.component_lines.end()) s["line"] = it->second;
    side["soft"].push_back(s);
  }
  const fs::path map = sidecar_of(f.output);
  write_file(map, side.dump(2) + "\n");
  out << nlohmann::json{{"wcnf", f.output},
                        {"map", map.string()},
                        {"vars", p.unified.hard.num_vars()},
                        {"hard", p.unified.hard.clauses().size()},
                        {"soft", p.unified.soft.size()}}
             .dump(2)
      << "\n";
  return kOk;
}

int cmd_inject(const Flags& f, int faults, std::size_t observations, const std::string& obs_out,
               std::ostream& out) {
  if (f.inputs.size() != 1) throw InputError("inject expects one <circuit.bench>");
  if (f.output.empty()) throw InputError("inject needs -o <faulty.bench>");
  const std::string& path = f.inputs[0];
  auto golden = parsing(path, [&] {
    return circuit::parse_bench(read_file(path), fs::path(path).stem().string());
  });
  auto faulty = circuit::inject_faults(golden, faults, f.seed);
  write_file(f.output, circuit::render_bench(faulty.circuit));
  nlohmann::json j;
  j["faults"] = nlohmann::json::array();
  for (const auto& ft : faulty.faults)
    j["faults"].push_back({{"gate", ft.gate},
                           {"from", std::string(circuit::to_string(ft.from))},
                           {"to", std::string(circuit::to_string(ft.to))}});
  j["seed"] = f.seed;
  if (!obs_out.empty()) {
    auto obs = circuit::generate_observations(golden, faulty.circuit, observations, f.seed + 1);
    write_file(obs_out, circuit::observations_to_json(obs));
    j["observations"] = obs.size();
  }
  out << j.dump(2) << "\n";
  return kOk;
}

std::vector<engines::Engine> parse_engines(const std::vector<std::string>& names) {
  std::vector<engines::Engine> out;
  for (const std::string& n : names) out.push_back(engines::parse_engine(n));
  return out;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Formula-based fault localisation for circuits and mini-language programs",
               "faultloc"};
  app.require_subcommand(1);
  Flags f;

  auto* localize = app.add_subcommand("localize", "Compute diagnoses with one engine");
  localize->add_option("inputs", f.inputs, "program.mc tests.json | circuit.bench obs.json | model.wcnf")
      ->required();
  add_pipeline_flags(localize, f);
  add_engine_flags(localize, f);
  localize->add_option("-o,--output", f.output, "Write the report here instead of stdout");

  std::vector<std::string> components;
  std::vector<int> lines;
  auto* validate = app.add_subcommand("validate", "Check a candidate diagnosis");
  validate->add_option("inputs", f.inputs, "Same inputs as localize")->required();
  add_pipeline_flags(validate, f);
  validate->add_option("--components", components, "Components to deactivate")->delimiter(',');
  validate->add_option("--lines", lines, "Deactivate every component on these lines")
      ->delimiter(',');
  validate->add_option("--time-budget", f.time_budget, "Wall-clock budget in seconds");

  auto* exportw = app.add_subcommand("export-wcnf", "Write the unified WCNF and its sidecar map");
  exportw->add_option("inputs", f.inputs, "Same inputs as localize")->required();
  add_pipeline_flags(exportw, f);
  exportw->add_option("-o,--output", f.output, "Output .wcnf path")->required();

  int faults = 1;
  std::size_t observations = 10;
  std::string obs_out;
  auto* inject = app.add_subcommand("inject", "Inject gate-kind faults into a circuit");
  inject->add_option("circuit", f.inputs, "circuit.bench")->required();
  inject->add_option("--faults", faults, "Number of faulty gates")->check(CLI::PositiveNumber);
  inject->add_option("--seed", f.seed, "Random seed");
  inject->add_option("-o,--output", f.output, "Faulty circuit path")->required();
  inject->add_option("--observations", observations, "Failing observations to generate")
      ->check(CLI::PositiveNumber);
  inject->add_option("--obs-out", obs_out, "Write failing observations here");

  harness::CampaignConfig cfg;
  std::vector<std::string> circuits, engine_names;
  auto* generate = app.add_subcommand("generate", "Generate a fault-injection campaign");
  generate->add_option("circuits", circuits, "BENCH files")->required();
  generate->add_option("--faults", cfg.fault_counts, "Fault counts")->delimiter(',');
  generate->add_option("--observations", cfg.observation_counts, "Observation counts")
      ->delimiter(',');
  generate->add_option("--seed,--seeds", cfg.seeds, "Seeds")->delimiter(',');
  generate->add_option("-o,--output", f.output, "Campaign directory")->required();

  std::string campaign_dir;
  auto* campaign = app.add_subcommand("run-campaign", "Run engines over a campaign directory");
  campaign->add_option("dir", campaign_dir, "Campaign directory")->required();
  campaign->add_option("--engine,--engines", engine_names, "Engines to run")->delimiter(',');
  campaign->add_option("--time-budget", cfg.time_budget_s, "Seconds per instance and engine")
      ->check(CLI::PositiveNumber);
  campaign->add_option("--enum-budget", cfg.enum_budget, "Cap on enumerated diagnoses")
      ->check(CLI::PositiveNumber);
  campaign->add_option("--threads", cfg.threads, "Worker threads (0 = all cores)");
  campaign->add_option("-o,--output", f.output, "Directory for the CSV files");

  try {
    std::vector<std::string> rev(args.rbegin(), args.rend());
    app.parse(rev);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kOk : kBadInput;
  }

  try {
    if (*localize) return cmd_localize(f, out, err);
    if (*validate) return cmd_validate(f, components, lines, out);
    if (*exportw) return cmd_export(f, out);
    if (*inject) return cmd_inject(f, faults, observations, obs_out, out);
    if (*generate) {
      cfg.circuits.assign(circuits.begin(), circuits.end());
      for (const auto& c : cfg.circuits)
        if (!fs::exists(c)) throw InputError(c.string() + ": cannot read file");
      auto gen = harness::generate_campaign(cfg, f.output);
      nlohmann::json j = nlohmann::json::array();
      for (const auto& g : gen)
        j.push_back({{"name", g.name}, {"skipped", g.skipped}, {"observations", g.observations}});
      out << j.dump(2) << "\n";
      return kOk;
    }
    if (*campaign) {
      if (!engine_names.empty()) cfg.engines = parse_engines(engine_names);
      auto rows = harness::run_campaign(campaign_dir, cfg, f.output);
      std::map<std::string, int> by_status;
      for (const auto& r : rows) ++by_status[std::string(harness::to_string(r.status))];
      const fs::path target = f.output.empty() ? fs::path(campaign_dir) : fs::path(f.output);
      out << nlohmann::json{{"rows", rows.size()},
                            {"status", by_status},
                            {"results", (target / "results.csv").string()}}
                 .dump(2)
          << "\n";
      return kOk;
    }
  } catch (const InputError& e) {
    err << "error: " << e.what() << "\n";
    return kBadInput;
  } catch (const ParseError& e) {
    err << "error: " << e.what() << "\n";
    return kBadInput;
  } catch (const PreconditionError& e) {
    err << "error: " << e.what() << "\n";
    return kBadInput;
  } catch (const NoDiagnosisError& e) {
    err << "error: " << e.what() << "\n";
    return kNoDiagnosis;
  } catch (const BudgetExceededError& e) {
    err << "error: " << e.what() << "\n";
    return kBudget;
  } catch (const TimeoutError& e) {
    err << "error: " << e.what() << "\n";
    return kBudget;
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return kBadInput;
  } catch (const std::filesystem::filesystem_error& e) {
    err << "error: " << e.what() << "\n";
    return kBadInput;
  }
  return kBadInput;
}

}  // namespace faultloc::cli
