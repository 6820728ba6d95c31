// SPDX-License-Identifier: Apache-2.0
#include "faultloc/formula/sat_oracle.hpp"

#include <unistd.h>

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "faultloc/error.hpp"
#include "faultloc/formula/cdcl_solver.hpp"
#include "faultloc/formula/dimacs.hpp"

namespace faultloc::formula {
namespace {

// Runs an external DIMACS solver from scratch on every call.
class ExternalOracle final : public SatOracle {
 public:
  explicit ExternalOracle(std::string command) : command_(std::move(command)) {}

  void ensure_vars(int n) override { formula_.ensure_vars(n); }
  int num_vars() const override { return formula_.num_vars(); }
  void add_clause(std::span<const Lit> clause) override {
    formula_.add_clause(Clause(clause.begin(), clause.end()));
  }
  void set_deadline(const Deadline& deadline) override { deadline_ = deadline; }

  SatOutcome solve(std::span<const Lit> assumptions) override {
    ++calls_;
    deadline_.check();
    CnfFormula f = formula_;
    for (Lit a : assumptions) f.add_clause(Clause{a});

    auto path = std::filesystem::temp_directory_path() /
                ("faultloc-" + std::to_string(::getpid()) + "-" +
                 std::to_string(calls_) + ".cnf");
    {
      std::ofstream out(path);
      out << write_dimacs_cnf(f);
    }
    std::string cmd = command_ + " '" + path.string() + "' 2>/dev/null";
    std::string output;
    if (FILE* pipe = ::popen(cmd.c_str(), "r")) {
      char buf[4096];
      std::size_t n = 0;
      while ((n = std::fread(buf, 1, sizeof buf, pipe)) > 0) output.append(buf, n);
      ::pclose(pipe);
    }
    std::filesystem::remove(path);

    SatOutcome res;
    std::istringstream in(output);
    std::string line;
    bool answered = false;
    std::vector<bool> model(static_cast<std::size_t>(f.num_vars()) + 1, false);
    while (std::getline(in, line)) {
      if (line.rfind("s ", 0) == 0) {
        answered = true;
        if (line.find("UNSATISFIABLE") != std::string::npos)
          res.status = SatStatus::kUnsat;
        else if (line.find("SATISFIABLE") != std::string::npos)
          res.status = SatStatus::kSat;
        else
          answered = false;
      } else if (line.rfind("v ", 0) == 0) {
        std::istringstream vs(line.substr(2));
        int d = 0;
        while (vs >> d)
          if (d != 0 && std::abs(d) <= f.num_vars())
            model[static_cast<std::size_t>(std::abs(d))] = d > 0;
      }
    }
    if (!answered)
      throw Error("external SAT command produced no 's' status line: " +
                  command_);
    if (res.sat())
      res.model = std::move(model);
    else
      res.core.assign(assumptions.begin(), assumptions.end());
    return res;
  }

 private:
  std::string command_;
  CnfFormula formula_;
  Deadline deadline_;
};

}  // namespace

OracleFactory cdcl_factory() {
  return [] { return std::make_unique<CdclSolver>(); };
}

OracleFactory external_factory(std::string command) {
  return [command = std::move(command)] {
    return std::make_unique<ExternalOracle>(command);
  };
}

SatOutcome sat_solve(const CnfFormula& f, std::span<const Lit> assumptions) {
  f.validate();
  for (Lit a : assumptions)
    if (a.var() <= 0 || a.var() > f.num_vars())
      throw FormulaError("assumption over undeclared variable " +
                         std::to_string(a.var()));
  CdclSolver solver;
  solver.add_formula(f);
  return solver.solve(assumptions);
}

}  // namespace faultloc::formula
