// End-to-end tests that drive the installed command-line tool as a subprocess
// and pin its output shapes and exit codes.

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <string>

#include "doctest.h"
#include "json.hpp"
#include "support/test_util.hpp"

namespace fs = std::filesystem;
using nlohmann::json;
using timebound::testing::cli_path;
using timebound::testing::CommandResult;
using timebound::testing::corpus_path;
using timebound::testing::read_file;
using timebound::testing::run_command;
using timebound::testing::write_temp_file;

namespace {

std::string argq(const std::string& s) { return "'" + s + "'"; }

/// Runs the CLI with the given argument string under `sh`.
CommandResult cli(const std::string& args) { return run_command(argq(cli_path()) + " " + args); }

std::size_t count_occurrences(const std::string& haystack, const std::string& needle) {
  std::size_t count = 0;
  for (std::size_t pos = haystack.find(needle); pos != std::string::npos;
       pos = haystack.find(needle, pos + needle.size()))
    ++count;
  return count;
}

std::string make_temp_dir(const std::string& tag) {
  fs::path dir = fs::temp_directory_path() /
                 ("timebound-cli-" + tag + "-" + std::to_string(::getpid()));
  fs::create_directories(dir);
  return dir.string();
}

}  // namespace

TEST_SUITE("cli") {

TEST_CASE("run reports the exact cost and the final state") {
  CommandResult r = cli("run " + argq(corpus_path("swap.imp")) + " --state 'x=10,y=20'");
  CHECK(r.exit_code == 0);
  CHECK(r.output.find("cost: 6\n") != std::string::npos);
  CHECK(r.output.find("x = 20\n") != std::string::npos);
  CHECK(r.output.find("y = 10\n") != std::string::npos);
  CHECK(r.output.find("z = 10\n") != std::string::npos);
}

TEST_CASE("run on the division example produces quotient and remainder") {
  CommandResult r = cli("run " + argq(corpus_path("division.imp")) + " --state 'x=7,y=2,r=7'");
  CHECK(r.exit_code == 0);
  CHECK(r.output.find("cost: 36\n") != std::string::npos);
  CHECK(r.output.find("q = 3\n") != std::string::npos);
  CHECK(r.output.find("r = 1\n") != std::string::npos);
}

TEST_CASE("run reports runtime errors with the source line") {
  std::string program = write_temp_file(
      "#mode: classic\n"
      "{ true }\n"
      "x = 1 / y\n"
      "{ true | 10 }\n",
      ".imp");
  CommandResult r = cli("run " + argq(program));
  CHECK(r.exit_code == 1);
  CHECK(r.output.find("runtime error") != std::string::npos);
  CHECK(r.output.find(":3") != std::string::npos);
}

TEST_CASE("run stops a diverging loop when fuel runs out") {
  std::string program = write_temp_file(
      "#mode: classic\n"
      "{ true }\n"
      "while 0 <= x [invariant: true; variant: x; bound: 1; cost: fun k -> 1] do\n"
      "  x = x\n"
      "end\n"
      "{ true | 1 }\n",
      ".imp");
  CommandResult r = cli("run " + argq(program) + " --fuel 10");
  CHECK(r.exit_code == 1);
  CHECK(r.output.find("runtime error") != std::string::npos);
}

TEST_CASE("syntax errors exit with the parse code and a location") {
  std::string program = write_temp_file(
      "#mode: classic\n"
      "{ true }\n"
      "x = ;\n"
      "{ true | 1 }\n",
      ".imp");
  CommandResult r = cli("run " + argq(program));
  CHECK(r.exit_code == 2);
  CHECK(r.output.find(":3:") != std::string::npos);
  CHECK(r.output.find("error:") != std::string::npos);
}

TEST_CASE("a missing input file is reported as a parse-level failure") {
  CommandResult r = cli("run /nonexistent/definitely-missing.imp");
  CHECK(r.exit_code == 2);
  CHECK(r.output.find("cannot read file") != std::string::npos);
}

TEST_CASE("vcs prints a count followed by one named goal per line") {
  CommandResult r = cli("vcs " + argq(corpus_path("division.imp")));
  CHECK(r.exit_code == 0);
  CHECK(r.output.rfind("6 VCs\n", 0) == 0);
  CHECK(r.output.find("main.correctness: ") != std::string::npos);
  CHECK(r.output.find("main.cost-bound: ") != std::string::npos);
  CHECK(r.output.find("while0.invariant-preservation: ") != std::string::npos);
  CHECK(r.output.find("while0.termination-bound: ") != std::string::npos);
}

TEST_CASE("vcs renders solver-ready goals on request") {
  CommandResult r = cli("vcs " + argq(corpus_path("division.imp")) + " --format smt");
  CHECK(r.exit_code == 0);
  CHECK(r.output.find("(set-logic ALL)") != std::string::npos);
  CHECK(r.output.find("(check-sat)") != std::string::npos);
  CHECK(r.output.find("; goal: main.correctness") != std::string::npos);
}

TEST_CASE("vcs writes one goal file per VC plus an index") {
  std::string dir = make_temp_dir("vcs-out");
  CommandResult r = cli("vcs " + argq(corpus_path("division.imp")) + " --out " + argq(dir));
  CHECK(r.exit_code == 0);

  std::string index = read_file(dir + "/index.tsv");
  CHECK(count_occurrences(index, "\n") == 6);
  CHECK(index.find("main.cost-bound\tdivision.main.cost-bound.txt\n") != std::string::npos);

  std::string goal = read_file(dir + "/division.main.correctness.txt");
  CHECK(goal.find("=>") != std::string::npos);
  fs::remove_all(dir);
}

TEST_CASE("mode overrides that lose required annotations use the oracle exit code") {
  CommandResult r = cli("vcs " + argq(corpus_path("binary_counter.imp")) + " --mode classic");
  CHECK(r.exit_code == 3);
  CHECK(r.output.find("missing") != std::string::npos);

  // `run` never needs annotations conceptually, but the language requires the
  // mode's oracles at parse time, so the same file fails there as a plain
  // parse error.
  CommandResult rr = cli("run " + argq(corpus_path("binary_counter.imp")) + " --mode classic");
  CHECK(rr.exit_code == 2);
}

TEST_CASE("check reports one verdict per goal from the configured solver") {
  CommandResult r =
      cli("check " + argq(corpus_path("division.imp")) + " --solver 'echo unsat'");
  CHECK(r.exit_code == 0);
  CHECK(count_occurrences(r.output, "Valid") == 6);
  CHECK(r.output.find("main.correctness") != std::string::npos);
}

TEST_CASE("check exit codes rank invalid above solver trouble") {
  CommandResult sat = cli("check " + argq(corpus_path("division.imp")) + " --solver 'echo sat'");
  CHECK(sat.exit_code == 4);
  CHECK(count_occurrences(sat.output, "Invalid") == 6);

  CommandResult unknown =
      cli("check " + argq(corpus_path("division.imp")) + " --solver 'echo unknown'");
  CHECK(unknown.exit_code == 5);
  CHECK(count_occurrences(unknown.output, "Unknown") == 6);

  CommandResult garbled =
      cli("check " + argq(corpus_path("division.imp")) + " --solver 'echo pony'");
  CHECK(garbled.exit_code == 5);
  CHECK(count_occurrences(garbled.output, "SolverError") == 6);
}

TEST_CASE("check without any solver configured fails with guidance") {
  CommandResult r = run_command("TIMEBOUND_SOLVER= " + argq(cli_path()) + " check " +
                                argq(corpus_path("division.imp")));
  CHECK(r.exit_code == 5);
  CHECK(r.output.find("no solver configured") != std::string::npos);
}

TEST_CASE("check falls back to the solver environment variable") {
  CommandResult r = run_command("TIMEBOUND_SOLVER='echo unsat' " + argq(cli_path()) + " check " +
                                argq(corpus_path("division.imp")));
  CHECK(r.exit_code == 0);
  CHECK(count_occurrences(r.output, "Valid") == 6);
}

TEST_CASE("check can fan goals out over several solver processes") {
  CommandResult r =
      cli("check " + argq(corpus_path("division.imp")) + " --solver 'echo unsat' --jobs 4");
  CHECK(r.exit_code == 0);
  CHECK(count_occurrences(r.output, "Valid") == 6);
}

TEST_CASE("fuzz writes a machine-readable summary next to the current directory") {
  std::string dir = make_temp_dir("fuzz-default");
  CommandResult r = run_command("cd " + argq(dir) + " && " + argq(cli_path()) + " fuzz " +
                                argq(corpus_path("range_filter.imp")) +
                                " --trials 25 --seed 7 --range 'n=0:8'");
  CHECK(r.exit_code == 0);
  CHECK(r.output.find("check-bound") != std::string::npos);
  CHECK(r.output.find("violations=0") != std::string::npos);

  json summary = json::parse(read_file(dir + "/range_filter.fuzz.json"));
  CHECK(summary["program"] == "range_filter");
  CHECK(summary["seed"] == 7);
  REQUIRE(summary["reports"].size() == 1);
  CHECK(summary["reports"][0]["name"] == "check-bound");
  CHECK(summary["reports"][0]["trials"] == 25);
  CHECK(summary["reports"][0]["violations"] == 0);
  fs::remove_all(dir);
}

TEST_CASE("fuzz adds the telescoping report for amortized programs") {
  std::string summary_path = write_temp_file("", ".json");
  CommandResult r = cli("fuzz " + argq(corpus_path("binary_counter.imp")) +
                        " --trials 5 --seed 3 --range 'n=1:16' --range 'c=2:4' --summary " +
                        argq(summary_path));
  CHECK(r.exit_code == 0);
  json summary = json::parse(read_file(summary_path));
  REQUIRE(summary["reports"].size() == 2);
  CHECK(summary["reports"][0]["name"] == "check-bound");
  CHECK(summary["reports"][1]["name"] == "check-amortized-telescoping");
  CHECK(summary["reports"][1]["violations"] == 0);
}

TEST_CASE("fuzz flags an understated bound and exits with the violation code") {
  std::string source = read_file(corpus_path("swap.imp"));
  std::size_t pos = source.rfind("| 6");
  REQUIRE(pos != std::string::npos);
  source.replace(pos, 3, "| 5");
  std::string program = write_temp_file(source, ".imp");
  std::string summary_path = write_temp_file("", ".json");

  CommandResult r =
      cli("fuzz " + argq(program) + " --trials 10 --summary " + argq(summary_path));
  CHECK(r.exit_code == 6);
  CHECK(r.output.find("cost-bound") != std::string::npos);
  json summary = json::parse(read_file(summary_path));
  CHECK(summary["reports"][0]["violations"] == 10);
}

TEST_CASE("fuzz reports an unsatisfiable precondition as a runtime failure") {
  std::string program = write_temp_file(
      "#mode: classic\n"
      "{ x = 0 and x = 1 }\n"
      "skip\n"
      "{ true | 1 }\n",
      ".imp");
  std::string summary_path = write_temp_file("", ".json");
  CommandResult r =
      cli("fuzz " + argq(program) + " --trials 5 --summary " + argq(summary_path));
  CHECK(r.exit_code == 1);
  CHECK(r.output.find("error") != std::string::npos);
}

TEST_CASE("malformed sampler flags are rejected") {
  std::string file = argq(corpus_path("swap.imp"));
  CHECK(cli("fuzz " + file + " --quant '@@' --trials 2").exit_code == 2);
  CHECK(cli("fuzz " + file + " --range 'x=1' --trials 2").exit_code == 2);
}

TEST_CASE("bad invocations fail through the argument parser") {
  CHECK(cli("frobnicate x").exit_code != 0);
  CHECK(cli("").exit_code != 0);
  CHECK(cli("fuzz " + argq(corpus_path("swap.imp")) + " --trials 0").exit_code != 0);
}

TEST_CASE("a cost model file changes the measured cost") {
  CommandResult unit = cli("run " + argq(corpus_path("swap.imp")) + " --cost-model " +
                           argq(corpus_path("unit.cost")));
  CHECK(unit.exit_code == 0);
  CHECK(unit.output.find("cost: 6\n") != std::string::npos);

  std::string model = write_temp_file("C_ASSIGN_V = 2\n", ".cost");
  CommandResult heavier =
      cli("run " + argq(corpus_path("swap.imp")) + " --cost-model " + argq(model));
  CHECK(heavier.exit_code == 0);
  CHECK(heavier.output.find("cost: 9\n") != std::string::npos);
}

TEST_CASE("the sum cost convention flag switches iteration counting") {
  std::string program = write_temp_file(
      "#mode: classic\n"
      "{ true }\n"
      "y = sum(k, 0, 2, k)\n"
      "{ true | 20 }\n",
      ".imp");
  CommandResult inclusive = cli("run " + argq(program));
  CHECK(inclusive.exit_code == 0);
  CHECK(inclusive.output.find("cost: 4\n") != std::string::npos);

  CommandResult paper = cli("run " + argq(program) + " --sum-cost paper");
  CHECK(paper.exit_code == 0);
  CHECK(paper.output.find("cost: 3\n") != std::string::npos);
}

}  // TEST_SUITE("cli")
