#include "doctest.h"
#include "timebound/emit.hpp"
#include "timebound/parser.hpp"

#include "support/test_util.hpp"

using namespace timebound;
using timebound::testing::corpus_path;
using timebound::testing::read_file;

TEST_SUITE_BEGIN("emit");

namespace {

const CostModel& unit() {
  static CostModel m = CostModel::unit();
  return m;
}

VerificationCondition vc_of(const char* name, const char* formula) {
  return {name, Provenance::Correctness, std::nullopt, parse_assertion(formula)};
}

std::vector<VerificationCondition> division_vcs() {
  AnnotatedProgram p = parse_program(read_file(corpus_path("division.imp")));
  return vcg(p, unit());
}

}  // namespace

TEST_CASE("status names") {
  CHECK(to_string(GoalStatus::Valid) == "Valid");
  CHECK(to_string(GoalStatus::Invalid) == "Invalid");
  CHECK(to_string(GoalStatus::Unknown) == "Unknown");
  CHECK(to_string(GoalStatus::SolverError) == "SolverError");
  CHECK(to_string(GoalStatus::Timeout) == "Timeout");
}

TEST_CASE("closure quantifies free scalars alphabetically, arrays stay free") {
  AssertPtr closed = close_formula(parse_assertion("q + x >= 0 and a[0] = y"));
  CHECK(pretty(closed) == "forall q. forall x. forall y. q + x >= 0 and a[0] = y");
  CHECK(free_vars(closed) == std::set<std::string>{"a"});
}

TEST_CASE("closure leaves closed formulas alone") {
  AssertPtr already = parse_assertion("forall k. k = k");
  CHECK(equal(close_formula(already), already));
}

TEST_CASE("rendered text reparses for every division condition") {
  for (const VerificationCondition& vc : division_vcs()) {
    CAPTURE(vc.name);
    std::string text = render_text(vc);
    CHECK_NOTHROW(parse_assertion(text));
  }
}

TEST_CASE("goals negate the closed formula for an unsat check") {
  std::string smt = render_smt(vc_of("t", "x + 1 > x"));
  CHECK(smt.find("; goal: t") != std::string::npos);
  CHECK(smt.find("(set-logic ALL)") != std::string::npos);
  CHECK(smt.find("(declare-const x Int)") != std::string::npos);
  CHECK(smt.find("(assert (not ") != std::string::npos);
  CHECK(smt.find("(check-sat)") != std::string::npos);
}

TEST_CASE("arrays declare as integer arrays") {
  std::string smt = render_smt(vc_of("t", "a[i] >= 0"));
  CHECK(smt.find("(declare-const a (Array Int Int))") != std::string::npos);
  CHECK(smt.find("select") != std::string::npos);
}

TEST_CASE("helper functions appear only when the goal needs them") {
  std::string plain = render_smt(vc_of("t", "x + 1 > x"));
  CHECK(plain.find("tdiv") == std::string::npos);
  CHECK(plain.find("tpow") == std::string::npos);
  CHECK(plain.find("tmax") == std::string::npos);
  CHECK(plain.find("log2") == std::string::npos);

  CHECK(render_smt(vc_of("t", "x / 2 <= x ^ 2")).find("define-fun tdiv") != std::string::npos);
  CHECK(render_smt(vc_of("t", "x ^ 2 >= 0")).find("define-fun-rec tpow") != std::string::npos);
  CHECK(render_smt(vc_of("t", "max(x, y) >= x")).find("define-fun tmax") != std::string::npos);
}

TEST_CASE("the log function gets power-of-two axioms and concrete instances") {
  std::string smt = render_smt(vc_of("t", "log(8) = 3"));
  CHECK(smt.find("(declare-fun log2 (Int) Int)") != std::string::npos);
  CHECK(smt.find("(assert (= (log2 8) 3))") != std::string::npos);
  CHECK(smt.find("(assert (= (log2 1024) 10))") != std::string::npos);
}

TEST_CASE("sums over small literal ranges unroll") {
  std::string smt = render_smt(vc_of("t", "sum(k, 0, 3, k * k) = 14"));
  CHECK(smt.find("define-fun-rec") == std::string::npos);
}

TEST_CASE("sums with symbolic bounds become recursive definitions") {
  std::string smt = render_smt(vc_of("t", "sum(k, 0, n, k) >= 0"));
  CHECK(smt.find("define-fun-rec sum") != std::string::npos);
}

TEST_CASE("make_goal carries the name and starts unknown") {
  GoalDocument goal = make_goal(vc_of("demo.correctness", "x = x"));
  CHECK(goal.vc_name == "demo.correctness");
  CHECK(goal.status == GoalStatus::Unknown);
  CHECK_FALSE(goal.logic_text.empty());
  CHECK_FALSE(goal.smt_text.empty());
}

TEST_CASE("brute force validates tautologies and refutes falsifiable goals") {
  CHECK(brute_check(vc_of("t", "0 = 0 => 1 >= 1")).status == GoalStatus::Valid);
  CHECK(brute_check(vc_of("t", "x + 1 > x")).status == GoalStatus::Valid);

  BruteResult refuted = brute_check(vc_of("t", "x > 0"));
  CHECK(refuted.status == GoalStatus::Invalid);
  REQUIRE(refuted.counterexample.has_value());
  CHECK(refuted.counterexample->scalar("x") <= 0);
  CHECK_FALSE(satisfies(parse_assertion("x > 0"), *refuted.counterexample));
}

TEST_CASE("brute force ranges can be narrowed per variable") {
  BruteOptions opts;
  opts.var_ranges["x"] = {5, 8};
  CHECK(brute_check(vc_of("t", "x >= 5"), opts).status == GoalStatus::Valid);
  CHECK(brute_check(vc_of("t", "x >= 6"), opts).status == GoalStatus::Invalid);
}

TEST_CASE("brute force gives up on arrays and oversized boxes") {
  CHECK(brute_check(vc_of("t", "a[0] = a[0]")).status == GoalStatus::Unknown);
  BruteOptions tiny;
  tiny.max_assignments = 10;
  CHECK(brute_check(vc_of("t", "x + y + z = z + y + x"), tiny).status == GoalStatus::Unknown);
}

TEST_CASE("brute force skips assignments that cannot evaluate") {
  // x = 0 divides by zero and proves nothing; every other x satisfies it.
  CHECK(brute_check(vc_of("t", "x / x = 1 or x / x = -1")).status == GoalStatus::Valid);
}

TEST_CASE("brute force discharges the division cost bound over a box") {
  std::vector<VerificationCondition> vcs = division_vcs();
  REQUIRE(vcs[1].name == "main.cost-bound");
  BruteOptions opts;
  opts.var_ranges["x"] = {0, 12};
  CHECK(brute_check(vcs[1], opts).status == GoalStatus::Valid);
}

TEST_CASE("brute force instantiates quantifiers over its own box") {
  CHECK(brute_check(vc_of("t", "forall k. k <= x or k > x")).status == GoalStatus::Valid);
  CHECK(brute_check(vc_of("t", "exists k. k = x")).status == GoalStatus::Valid);
}

TEST_CASE("solver verdicts map onto goal statuses") {
  GoalDocument goal = make_goal(vc_of("t", "x = x"));
  CHECK(run_solver(goal, "echo unsat", 5).status == GoalStatus::Valid);
  CHECK(run_solver(goal, "echo sat", 5).status == GoalStatus::Invalid);
  CHECK(run_solver(goal, "echo unknown", 5).status == GoalStatus::Unknown);
}

TEST_CASE("the first verdict token wins, whatever surrounds it") {
  GoalDocument goal = make_goal(vc_of("t", "x = x"));
  CHECK(run_solver(goal, "printf 'pony\\nunsat\\n'", 5).status == GoalStatus::Valid);
  CHECK(run_solver(goal, "printf 'unsat sat\\n'", 5).status == GoalStatus::Valid);
}

TEST_CASE("unparseable solver output is a solver error") {
  GoalDocument goal = make_goal(vc_of("t", "x = x"));
  CHECK(run_solver(goal, "echo pony", 5).status == GoalStatus::SolverError);
  CHECK(run_solver(goal, "true", 5).status == GoalStatus::SolverError);  // no output at all
  CHECK(run_solver(goal, "sh -c 'exit 3'", 5).status == GoalStatus::SolverError);
  // Echoing the goal back contains no bare verdict token: (check-sat) is one
  // parenthesized word.
  CHECK(run_solver(goal, "cat", 5).status == GoalStatus::SolverError);
}

TEST_CASE("a solver overrunning its budget reports a timeout") {
  GoalDocument goal = make_goal(vc_of("t", "x = x"));
  CHECK(run_solver(goal, "sleep 3", 1).status == GoalStatus::Timeout);
}

TEST_SUITE_END();
