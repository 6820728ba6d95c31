#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>

#include <nlohmann/json.hpp>

#include "cli.hpp"
#include "faultloc/formula/dimacs.hpp"

namespace fs = std::filesystem;
using faultloc::cli::run;
using nlohmann::json;

namespace {

const fs::path kFixtures = FAULTLOC_FIXTURES;

struct Result {
  int code;
  std::string out, err;
  json j() const { return json::parse(out); }
};

Result cli(std::vector<std::string> args) {
  std::ostringstream out, err;
  int code = run(args, out, err);
  return {code, out.str(), err.str()};
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

struct TempDir {
  fs::path path;
  TempDir() {
    path = fs::temp_directory_path() / ("faultloc_cli_" + std::to_string(std::random_device{}()));
    fs::create_directories(path);
  }
  ~TempDir() { fs::remove_all(path); }
  std::string file(const std::string& name, const std::string& text) const {
    std::ofstream(path / name) << text;
    return (path / name).string();
  }
};

const std::string kMax3 = (kFixtures / "max3.mc").string();
const std::string kMax3Tests = (kFixtures / "max3_tests.json").string();
const std::string kC17 = (kFixtures / "c17.bench").string();

std::vector<int> selected_lines(const json& j) {
  return j["selected"]["lines"].get<std::vector<int>>();
}

}  // namespace

TEST(Cli, Max3CFaults) {
  auto r = cli({"localize", "--engine", "cfaults", kMax3, kMax3Tests, "--weights",
                "hierarchical"});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_EQ(selected_lines(r.j()), (std::vector<int>{5, 8, 11}));
  for (const auto& d : r.j()["diagnoses"]) EXPECT_EQ(d["cost"], 3000);
}

TEST(Cli, Max3Sniper) {
  auto r = cli({"localize", "--engine", "sniper", kMax3, kMax3Tests});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_EQ(selected_lines(r.j()), (std::vector<int>{5, 8, 11}));
}

TEST(Cli, ConsistentObservationsGiveEmptyDiagnosis) {
  TempDir tmp;
  // c17 golden outputs for two input vectors.
  auto obs = tmp.file("obs.json",
                      R"({"observations":[{"in":"00000","out":"00"},{"in":"11111","out":"10"}]})");
  auto r = cli({"localize", "--engine", "cfaults", kC17, obs});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_EQ(r.j()["selected"]["cost"], 0);
  EXPECT_TRUE(r.j()["selected"]["components"].empty());
}

TEST(Cli, SniperBudgetExceeded) {
  // The max-of-three program produces more than 10 SNIPER unions.
  auto r = cli({"localize", "--engine", "sniper", "--enum-budget", "10", kMax3, kMax3Tests});
  EXPECT_EQ(r.code, 3);
  auto j = r.j();
  EXPECT_EQ(j["status"], "budget-exceeded");
  EXPECT_TRUE(j["stats"].contains("peak_enumeration"));
  EXPECT_TRUE(j["stats"].contains("oracle_calls"));
}

TEST(Cli, ParseErrorsAreLocated) {
  TempDir tmp;
  auto prog = tmp.file("bad.mc", "int main() {\n  int x;\n  x = *p;\n}\n");
  auto r = cli({"localize", prog, kMax3Tests});
  EXPECT_EQ(r.code, 1);
  EXPECT_NE(r.err.find("bad.mc: line 3:"), std::string::npos) << r.err;

  auto bench = tmp.file("bad.bench", "INPUT(a)\nOUTPUT(y)\ny = FOO(a)\n");
  auto obs = tmp.file("obs.json", R"({"observations":[{"in":"0","out":"1"}]})");
  r = cli({"localize", bench, obs});
  EXPECT_EQ(r.code, 1);
  EXPECT_NE(r.err.find("bad.bench"), std::string::npos) << r.err;

  EXPECT_EQ(cli({"localize", "--engine", "nope", kC17, obs}).code, 1);
  EXPECT_EQ(cli({"localize", "--bitwidth", "12", kMax3, kMax3Tests}).code, 1);
  EXPECT_EQ(cli({}).code, 1);
  EXPECT_EQ(cli({"localize", (tmp.path / "missing.mc").string(), kMax3Tests}).code, 1);
  EXPECT_EQ(cli({"--help"}).code, 0);
}

TEST(Cli, UnwindInsufficientExitsTwo) {
  TempDir tmp;
  auto prog = tmp.file("loop.mc", "int main() {\n  print(1);\n  for (;;) { }\n  return 0;\n}\n");
  auto tests = tmp.file("t.json", R"({"tests":[{"in":[],"out":[1]}]})");
  auto r = cli({"localize", prog, tests, "--unwind", "2"});
  EXPECT_EQ(r.code, 2);
  EXPECT_NE(r.err.find("unwind"), std::string::npos) << r.err;
}

TEST(Cli, ExportWcnfSingleGate) {
  TempDir tmp;
  auto bench = tmp.file("one.bench", "INPUT(a)\nINPUT(b)\nOUTPUT(y)\ny = AND(a, b)\n");
  auto obs = tmp.file("obs.json", R"({"observations":[{"in":"11","out":"0"}]})");
  const std::string out = (tmp.path / "one.wcnf").string();
  auto r = cli({"export-wcnf", bench, obs, "-o", out});
  ASSERT_EQ(r.code, 0) << r.err;
  auto w = faultloc::formula::parse_wcnf(slurp(out));
  EXPECT_EQ(w.soft.size(), 1u);
  auto side = json::parse(slurp(tmp.path / "one.map.json"));
  EXPECT_EQ(side["soft"][0]["component"], "y");
}

TEST(Cli, ExportRoundTripAndDeterminism) {
  TempDir tmp;
  auto inj = cli({"inject", kC17, "--faults", "2", "--seed", "9", "-o",
                  (tmp.path / "f.bench").string(), "--observations", "6", "--obs-out",
                  (tmp.path / "o.json").string()});
  ASSERT_EQ(inj.code, 0) << inj.err;
  const std::string bench = (tmp.path / "f.bench").string(), obs = (tmp.path / "o.json").string();
  const std::string a = (tmp.path / "a.wcnf").string(), b = (tmp.path / "b.wcnf").string();
  ASSERT_EQ(cli({"export-wcnf", bench, obs, "-o", a}).code, 0);
  ASSERT_EQ(cli({"export-wcnf", bench, obs, "-o", b}).code, 0);
  EXPECT_EQ(slurp(a), slurp(b));
  EXPECT_EQ(slurp(tmp.path / "a.map.json"), slurp(tmp.path / "b.map.json"));

  for (const char* engine : {"cfaults", "hsd"}) {
    auto direct = cli({"localize", "--engine", engine, bench, obs});
    auto imported = cli({"localize", "--engine", engine, a});
    ASSERT_EQ(direct.code, 0);
    ASSERT_EQ(imported.code, 0);
    EXPECT_EQ(direct.j()["diagnoses"], imported.j()["diagnoses"]) << engine;
  }

  auto pa = (tmp.path / "p.wcnf").string();
  ASSERT_EQ(cli({"export-wcnf", kMax3, kMax3Tests, "-o", pa}).code, 0);
  auto direct = cli({"localize", kMax3, kMax3Tests});
  auto imported = cli({"localize", pa});
  ASSERT_EQ(imported.code, 0) << imported.err;
  EXPECT_EQ(direct.j()["diagnoses"].size(), imported.j()["diagnoses"].size());
  for (std::size_t i = 0; i < direct.j()["diagnoses"].size(); ++i)
    EXPECT_EQ(direct.j()["diagnoses"][i]["components"], imported.j()["diagnoses"][i]["components"]);
}

TEST(Cli, Validate) {
  auto ok = cli({"validate", kMax3, kMax3Tests, "--lines", "5,8,11"});
  EXPECT_EQ(ok.code, 0) << ok.err;
  EXPECT_TRUE(ok.j()["valid"]);
  EXPECT_EQ(ok.j()["cost"], 3000);
  auto bad = cli({"validate", kMax3, kMax3Tests, "--lines", "5"});
  EXPECT_EQ(bad.code, 2);
  EXPECT_FALSE(bad.j()["valid"]);
  EXPECT_EQ(cli({"validate", kMax3, kMax3Tests, "--components", "nope"}).code, 1);
}

TEST(Cli, InjectGenerateRunCampaign) {
  TempDir tmp;
  auto gen = cli({"generate", kC17, "--faults", "1,2", "--observations", "4", "--seeds", "1,2",
                  "-o", tmp.path.string()});
  ASSERT_EQ(gen.code, 0) << gen.err;
  EXPECT_EQ(gen.j().size(), 4u);
  auto run_r = cli({"run-campaign", tmp.path.string(), "--engine", "cfaults,sniper", "--threads",
                    "2", "--time-budget", "20"});
  ASSERT_EQ(run_r.code, 0) << run_r.err;
  EXPECT_EQ(run_r.j()["rows"], 8);
  auto csv = slurp(tmp.path / "results.csv");
  EXPECT_EQ(csv.substr(0, csv.find('\n')), "instance,engine,status,time_s,cost,num_diagnoses,iterations");

  EXPECT_EQ(cli({"generate", kC17, "--faults", "0", "-o", tmp.path.string()}).code, 1);
  EXPECT_EQ(cli({"inject", kC17, "--faults", "99", "-o", (tmp.path / "x.bench").string()}).code, 1);
}

TEST(Cli, Deterministic) {
  auto a = cli({"localize", "--engine", "hsd", kMax3, kMax3Tests});
  auto b = cli({"localize", "--engine", "hsd", kMax3, kMax3Tests});
  EXPECT_EQ(a.out, b.out);
  auto t = cli({"localize", "--timing", kMax3, kMax3Tests});
  EXPECT_TRUE(t.j()["stats"].contains("wall_time_s"));
  EXPECT_FALSE(a.j()["stats"].contains("wall_time_s"));
}
