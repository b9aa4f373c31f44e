#include "doctest.h"
#include "timebound/harness.hpp"
#include "timebound/parser.hpp"

#include "support/test_util.hpp"

using namespace timebound;
using timebound::testing::corpus_path;
using timebound::testing::read_file;
using timebound::testing::scalars;

TEST_SUITE_BEGIN("harness");

namespace {

const CostModel& unit() {
  static CostModel m = CostModel::unit();
  return m;
}

bool has_category(const HarnessReport& report, const std::string& category) {
  for (const Violation& v : report.violations)
    if (v.category == category) return true;
  return false;
}

}  // namespace

TEST_CASE("describe renders states compactly") {
  ProgramState s = scalars("x", 3);
  s.set_cell("a", 0, 5);
  CHECK(describe(s) == "x=3 a[0]=5");
  CHECK(describe(ProgramState{}) == "(empty)");
}

TEST_CASE("sampling returns states satisfying the precondition") {
  AssertPtr pre = parse_assertion("x >= 0 and x <= 5");
  std::vector<ProgramState> states = sample_state(pre, {"x"}, {}, 50, 11);
  REQUIRE(!states.empty());
  for (const ProgramState& s : states) {
    Int x = s.scalar("x");
    CHECK(x >= 0);
    CHECK(x <= 5);
  }
}

TEST_CASE("sampling is deterministic in the seed") {
  AssertPtr pre = parse_assertion("x >= -3");
  std::vector<ProgramState> a = sample_state(pre, {"x", "y"}, {"arr"}, 20, 99);
  std::vector<ProgramState> b = sample_state(pre, {"x", "y"}, {"arr"}, 20, 99);
  REQUIRE(a.size() == b.size());
  for (std::size_t i = 0; i < a.size(); ++i) CHECK(a[i] == b[i]);
}

TEST_CASE("scalar equalities in the precondition are pinned, not rejected") {
  AssertPtr pre = parse_assertion("n = 4 and x >= n");
  SampleStats stats;
  std::vector<ProgramState> states = sample_state(pre, {"n", "x"}, {}, 40, 5, {}, &stats);
  REQUIRE(!states.empty());
  for (const ProgramState& s : states) CHECK(s.scalar("n") == 4);
  // Pinning keeps acceptance well above blind 1-in-33 luck on n.
  CHECK(stats.acceptance_rate() > 0.1);
}

TEST_CASE("chained equalities resolve across two passes") {
  AssertPtr pre = parse_assertion("size = log(n) and n = 8");
  std::vector<ProgramState> states = sample_state(pre, {"size", "n"}, {}, 10, 3);
  REQUIRE(!states.empty());
  for (const ProgramState& s : states) {
    CHECK(s.scalar("n") == 8);
    CHECK(s.scalar("size") == 3);
  }
}

TEST_CASE("unsatisfiable preconditions exhaust the sampler") {
  CHECK_THROWS_AS(sample_state(parse_assertion("false"), {}, {}, 3, 1), SamplingExhausted);
  CHECK_THROWS_AS(sample_state(parse_assertion("x > 100"), {"x"}, {}, 3, 1),
                  SamplingExhausted);
}

TEST_CASE("universally forced cells are filled in") {
  AssertPtr pre = parse_assertion("forall k. (0 <= k and k <= 4) => B[k] = 0");
  std::vector<ProgramState> states = sample_state(pre, {}, {"B"}, 20, 17);
  REQUIRE(!states.empty());
  for (const ProgramState& s : states)
    for (int k = 0; k <= 4; ++k) CHECK(s.cell("B", k) == 0);
}

TEST_CASE("adjacent order constraints sort the drawn cells strictly") {
  AssertPtr pre = parse_assertion("forall i. (0 <= i and i < n) => a[i] < a[i+1]");
  SamplerConfig config;
  config.overrides["n"] = {5, 5};
  std::vector<ProgramState> states = sample_state(pre, {"n"}, {"a"}, 20, 23, config);
  REQUIRE(!states.empty());
  for (const ProgramState& s : states)
    for (int i = 0; i < 5; ++i) CHECK(s.cell("a", i) < s.cell("a", i + 1));
}

TEST_CASE("pairwise order constraints sort the drawn cells weakly") {
  AssertPtr pre =
      parse_assertion("forall i. forall j. (0 <= i and i < j and j <= 4) => a[i] <= a[j]");
  std::vector<ProgramState> states = sample_state(pre, {}, {"a"}, 20, 31);
  REQUIRE(!states.empty());
  for (const ProgramState& s : states)
    for (int i = 0; i < 4; ++i) CHECK(s.cell("a", i) <= s.cell("a", i + 1));
}

TEST_CASE("existential witnesses are planted") {
  AssertPtr pre = parse_assertion("exists w. (0 <= w and w <= 5 and a[w] = x)");
  std::vector<ProgramState> states = sample_state(pre, {"x"}, {"a"}, 30, 41);
  REQUIRE(!states.empty());
  for (const ProgramState& s : states) {
    bool found = false;
    for (int w = 0; w <= 5; ++w)
      if (s.cell("a", w) == s.scalar("x")) found = true;
    CHECK(found);
  }
}

TEST_CASE("bound checking accepts a correct program") {
  AnnotatedProgram p = parse_program(read_file(corpus_path("swap.imp")));
  HarnessReport report = check_bound(p, unit(), 50, 7);
  CHECK(report.ok());
  CHECK(report.sampled == 50);
  CHECK(report.trials == 50);
  std::string text = report.to_text();
  CHECK(text.find("check-bound") != std::string::npos);
  CHECK(text.find("violations=0") != std::string::npos);
}

TEST_CASE("an understated bound is caught on every trial") {
  AnnotatedProgram p = parse_program("{ true } z = x; x = y; y = z { true | 5 }");
  HarnessReport report = check_bound(p, unit(), 25, 7);
  CHECK(report.violations.size() == 25);
  REQUIRE(has_category(report, "cost-bound"));
  const Violation& v = report.violations.front();
  CHECK(v.category == "cost-bound");
  REQUIRE(v.measured.has_value());
  REQUIRE(v.bound.has_value());
  CHECK(*v.measured == 6);
  CHECK(*v.bound == 5);
  CHECK(report.to_text().find("cost-bound") != std::string::npos);
}

TEST_CASE("a broken postcondition is caught") {
  AnnotatedProgram p = parse_program("{ true } x = 1 { x = 2 | 10 }");
  HarnessReport report = check_bound(p, unit(), 10, 7);
  CHECK(report.violations.size() == 10);
  CHECK(has_category(report, "postcondition"));
}

TEST_CASE("interpreter failures become report entries, not exceptions") {
  AnnotatedProgram p = parse_program("{ y = 0 } x = 1 / y { true | 10 }");
  HarnessReport report = check_bound(p, unit(), 5, 7);
  CHECK(report.violations.size() == 5);
  CHECK(has_category(report, "interpreter-error"));
}

TEST_CASE("exact mode requires equality, not domination") {
  AnnotatedProgram p = parse_program(read_file(corpus_path("range_filter.imp")));
  p.cost_bound = parse_arith("22 * n + 6");  // off by one, still an upper bound
  SamplerConfig config;
  config.overrides["n"] = {0, 6};
  HarnessOptions opts;
  opts.sampler = config;
  HarnessReport report = check_bound(p, unit(), 20, 7, opts);
  CHECK(report.violations.size() == 20);
  CHECK(has_category(report, "cost-bound"));
}

TEST_CASE("the exact corpus bound does hold with equality") {
  AnnotatedProgram p = parse_program(read_file(corpus_path("range_filter.imp")));
  SamplerConfig config;
  config.overrides["n"] = {0, 6};
  HarnessOptions opts;
  opts.sampler = config;
  HarnessReport report = check_bound(p, unit(), 40, 7, opts);
  CHECK(report.ok());
}

TEST_CASE("telescoping rejects classic programs") {
  AnnotatedProgram p = parse_program(read_file(corpus_path("division.imp")));
  CHECK_THROWS_AS(check_amortized_telescoping(p, unit(), 5, 7), std::invalid_argument);
}

TEST_CASE("telescoping passes on the binary counter") {
  AnnotatedProgram p = parse_program(read_file(corpus_path("binary_counter.imp")));
  SamplerConfig config;
  config.overrides["n"] = {1, 16};
  config.overrides["c"] = {2, 4};
  HarnessOptions opts;
  opts.sampler = config;
  HarnessReport report = check_amortized_telescoping(p, unit(), 10, 7, opts);
  CHECK(report.ok());
  CHECK(report.sampled == 10);
}

TEST_CASE("an inadequate amortized budget is caught on the first iteration") {
  AnnotatedProgram p = parse_program(
      "#mode: amortized\n"
      "{ x >= 1 and x <= 5 }"
      " while x > 0 [invariant: x >= 0; variant: x; bound: 5;"
      " amortized: 0; potential: 0] do x = x - 1 end { true | 100 }");
  HarnessReport report = check_amortized_telescoping(p, unit(), 10, 7);
  CHECK_FALSE(report.ok());
  CHECK(has_category(report, "amortized-budget"));
}

TEST_CASE("a nonzero entry potential is caught") {
  AnnotatedProgram p = parse_program(
      "#mode: amortized\n"
      "{ x = 3 }"
      " while x > 0 [invariant: x >= 0; variant: x; bound: 5;"
      " amortized: 10; potential: x] do x = x - 1 end { true | 100 }");
  HarnessReport report = check_amortized_telescoping(p, unit(), 5, 7);
  CHECK(has_category(report, "potential-entry"));
}

TEST_CASE("a potential that dips negative is caught") {
  AnnotatedProgram p = parse_program(
      "#mode: amortized\n"
      "{ x = 3 and y = 3 }"
      " while x > 0 [invariant: x >= 0; variant: x; bound: 5;"
      " amortized: 10; potential: x - y] do x = x - 1 end { true | 100 }");
  HarnessReport report = check_amortized_telescoping(p, unit(), 5, 7);
  CHECK(has_category(report, "potential-negative"));
}

TEST_CASE("a loop that never runs telescopes vacuously") {
  AnnotatedProgram p = parse_program(
      "#mode: amortized\n"
      "{ x = 0 }"
      " while x > 0 [invariant: x >= 0; variant: x; bound: 5;"
      " amortized: 0; potential: 0] do x = x - 1 end { true | 100 }");
  HarnessReport report = check_amortized_telescoping(p, unit(), 5, 7);
  CHECK(report.ok());
}

TEST_CASE("the substitution lemma holds on a quick fuzz run") {
  HarnessReport report = check_substitution_lemma(500, 13);
  CHECK(report.ok());
  CHECK(report.trials == 500);
  CHECK(report.sampled + report.skipped == 500);
  CHECK(report.sampled > 0);
}

TEST_SUITE_END();
