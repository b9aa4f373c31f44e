#include "doctest.h"
#include "timebound/ast.hpp"
#include "timebound/parser.hpp"

using namespace timebound;

TEST_SUITE_BEGIN("core");

TEST_CASE("cost model knows exactly the twenty atomic operations") {
  const auto& names = CostModel::names();
  CHECK(names.size() == 20);
  for (const char* name : {"C_CST", "C_VAR", "C_ARR", "C_ADD", "C_SUB", "C_MUL", "C_DIV",
                           "C_POW", "C_EQ", "C_NEQ", "C_LT", "C_GT", "C_LE", "C_GE", "C_NOT",
                           "C_AND", "C_OR", "C_SKIP", "C_ASSIGN_V", "C_ASSIGN_A"}) {
    CAPTURE(name);
    CHECK(CostModel::is_name(name));
  }
  CHECK_FALSE(CostModel::is_name("C_NOPE"));
}

TEST_CASE("cost model defaults every operation to one") {
  CostModel m = CostModel::unit();
  for (const std::string& name : CostModel::names()) CHECK(m.at(name) == 1);
}

TEST_CASE("cost model set and read back") {
  CostModel m;
  m.set("C_MUL", 5);
  m.set("C_SKIP", 0);
  CHECK(m.at("C_MUL") == 5);
  CHECK(m.at("C_SKIP") == 0);
  CHECK(m.at("C_ADD") == 1);
}

TEST_CASE("cost model rejects unknown names and negative prices") {
  CostModel m;
  CHECK_THROWS_AS(m.set("C_BOGUS", 1), std::invalid_argument);
  CHECK_THROWS_AS(m.set("C_MUL", -1), std::invalid_argument);
}

TEST_CASE("free variables of arithmetic expressions") {
  CHECK(free_vars(parse_arith("x + y * z")) == std::set<std::string>{"x", "y", "z"});
  CHECK(free_vars(parse_arith("17")) == std::set<std::string>{});
  // Array names count as free occurrences alongside scalars.
  CHECK(free_vars(parse_arith("a[i] + 1")) == std::set<std::string>{"a", "i"});
}

TEST_CASE("sum binders are bound in the body but not the bounds") {
  ArithPtr sum = parse_arith("sum(k, 0, n, a[k] + x)");
  CHECK(free_vars(sum) == std::set<std::string>{"a", "n", "x"});
  ArithPtr tricky = parse_arith("sum(k, k, n, k)");
  // The lower bound is outside the binder's scope, so that k is free.
  CHECK(free_vars(tricky) == std::set<std::string>{"k", "n"});
}

TEST_CASE("quantifier binders are bound") {
  CHECK(free_vars(parse_assertion("forall k. k < x")) == std::set<std::string>{"x"});
  CHECK(free_vars(parse_assertion("exists j. a[j] = v")) == std::set<std::string>{"a", "v"});
}

TEST_CASE("array names of expressions and statements") {
  CHECK(array_names(parse_arith("a[i] + b[j] + x")) == std::set<std::string>{"a", "b"});
  CHECK(array_names(parse_assertion("forall k. a[k] >= 0")) == std::set<std::string>{"a"});
  StmtPtr write = mk_arr_assign("c", mk_int(0), parse_arith("a[1]"));
  CHECK(array_names(write) == std::set<std::string>{"a", "c"});
}

TEST_CASE("collect_identifiers includes binders and array names") {
  std::set<std::string> ids;
  collect_identifiers(parse_assertion("forall k. sum(j, 0, n, a[j]) >= k"), ids);
  CHECK(ids == std::set<std::string>{"a", "j", "k", "n"});
}

TEST_CASE("program_variables and loop_ids walk statements in source order") {
  AnnotatedProgram swap = parse_program(
      "{ true } z = x; x = y; y = z { true | 6 }");
  CHECK(program_variables(swap.body) == std::set<std::string>{"x", "y", "z"});
  CHECK(loop_ids(swap.body).empty());

  AnnotatedProgram division =
      parse_program(
          "{ true } while y <= r [invariant: true; variant: x - r; bound: x;"
          " cost: fun k -> 10] do r = r - y; q = q + 1 end { true | 0 }");
  CHECK(program_variables(division.body) == std::set<std::string>{"q", "r", "y"});
  CHECK(loop_ids(division.body) == std::vector<int>{0});
}

TEST_CASE("fresh_name picks the base or the smallest numeric suffix") {
  CHECK(fresh_name("k", {}) == "k");
  CHECK(fresh_name("k", {"k"}) == "k1");
  CHECK(fresh_name("pk", {"pk", "pk1"}) == "pk2");
  // Never returns a member of the avoid set.
  std::set<std::string> avoid{"t", "t1", "t2", "t3"};
  CHECK(avoid.count(fresh_name("t", avoid)) == 0);
}

TEST_CASE("structural equality ignores source spans") {
  StmtPtr one = mk_skip(SourceSpan{1, 1, 4});
  StmtPtr other = mk_skip(SourceSpan{9, 3, 4});
  CHECK(equal(one, other));
  StmtPtr assign = mk_assign("x", mk_int(1), SourceSpan{2, 1, 5});
  CHECK_FALSE(equal(one, assign));
}

TEST_CASE("expression equality is structural") {
  CHECK(equal(parse_arith("x + 1"), parse_arith("x + 1")));
  CHECK_FALSE(equal(parse_arith("x + 1"), parse_arith("1 + x")));
  CHECK(equal(parse_assertion("forall k. k < x"), parse_assertion("forall k. k < x")));
  CHECK_FALSE(equal(parse_assertion("forall k. k < x"), parse_assertion("exists k. k < x")));
}

TEST_CASE("to_assertion mirrors the boolean structure") {
  BoolPtr cond = mk_bbin(BoolOp::And, mk_cmp(CmpOp::Lt, mk_var("x"), mk_int(3)),
                         mk_not(mk_cmp(CmpOp::Eq, mk_var("y"), mk_var("z"))));
  AssertPtr lifted = to_assertion(cond);
  CHECK(equal(lifted, parse_assertion("x < 3 and not (y = z)")));
}

TEST_CASE("verification mode names round-trip") {
  for (VerifMode mode : {VerifMode::Classic, VerifMode::Amortized, VerifMode::Exact})
    CHECK(mode_from_string(to_string(mode)) == mode);
  CHECK_FALSE(mode_from_string("bogus").has_value());
}

TEST_SUITE_END();
