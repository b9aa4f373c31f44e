#include "doctest.h"
#include "timebound/eval.hpp"
#include "timebound/parser.hpp"

#include "support/test_util.hpp"

using namespace timebound;
using timebound::testing::scalars;

TEST_SUITE_BEGIN("eval");

TEST_CASE("states are total: unwritten names and cells read zero") {
  ProgramState s;
  CHECK(s.scalar("never") == 0);
  CHECK(s.cell("a", 99) == 0);
  s.set_scalar("x", 3);
  s.set_cell("a", -2, 7);
  CHECK(s.scalar("x") == 3);
  CHECK(s.cell("a", -2) == 7);
}

TEST_CASE("state equality is equality of total maps") {
  ProgramState a;
  ProgramState b;
  b.set_scalar("x", 0);
  b.set_cell("arr", 4, 0);
  CHECK(a == b);  // explicit zeros are the same function as absence
  b.set_scalar("x", 1);
  CHECK(a != b);
}

TEST_CASE("arithmetic evaluation") {
  ProgramState s = scalars("x", 7, "y", 2);
  s.set_cell("a", 3, 40);
  CHECK(eval_aexp(parse_arith("x + y"), s) == 9);
  CHECK(eval_aexp(parse_arith("x - 2 * y"), s) == 3);
  CHECK(eval_aexp(parse_arith("a[x - 4]"), s) == 40);
  CHECK(eval_aexp(parse_arith("a[0]"), s) == 0);
}

TEST_CASE("division truncates toward zero and rejects zero divisors") {
  ProgramState s;
  CHECK(eval_aexp(parse_arith("7 / 2"), s) == 3);
  CHECK(eval_aexp(parse_arith("-7 / 2"), s) == -3);
  CHECK(eval_aexp(parse_arith("7 / -2"), s) == -3);
  CHECK(eval_aexp(parse_arith("-7 / -2"), s) == 3);
  try {
    eval_aexp(parse_arith("1 / x"), s);  // x reads 0
    FAIL("expected a division-by-zero error");
  } catch (const EvalError& e) {
    CHECK(e.kind() == EvalErrorKind::DivByZero);
  }
}

TEST_CASE("power is repeated multiplication with 0^0 = 1") {
  ProgramState s;
  CHECK(eval_aexp(parse_arith("2 ^ 10"), s) == 1024);
  CHECK(eval_aexp(parse_arith("0 ^ 0"), s) == 1);
  CHECK(eval_aexp(parse_arith("(-2) ^ 3"), s) == -8);
  try {
    eval_aexp(parse_arith("2 ^ (-1)"), s);
    FAIL("expected a negative-exponent error");
  } catch (const EvalError& e) {
    CHECK(e.kind() == EvalErrorKind::NegativeExponent);
  }
}

TEST_CASE("big integers do not wrap") {
  ProgramState s;
  Int huge = eval_aexp(parse_arith("2 ^ 100"), s);
  CHECK(huge == Int("1267650600228229401496703205376"));
}

TEST_CASE("sums are inclusive on both ends and empty below") {
  ProgramState s = scalars("n", 3);
  CHECK(eval_aexp(parse_arith("sum(x, 0, 3, x * x)"), s) == 14);
  CHECK(eval_aexp(parse_arith("sum(k, 0, n, k)"), s) == 6);
  CHECK(eval_aexp(parse_arith("sum(k, 5, 4, k)"), s) == 0);
  CHECK(eval_aexp(parse_arith("sum(k, 2, 2, k + 10)"), s) == 12);
}

TEST_CASE("sum binders shadow outer scalars inside the body only") {
  ProgramState s = scalars("k", 100);
  CHECK(eval_aexp(parse_arith("sum(k, 0, 2, k)"), s) == 3);
  CHECK(s.scalar("k") == 100);  // evaluation does not leak the binder
  CHECK(eval_aexp(parse_arith("sum(k, 0, 2, k) + k"), s) == 103);
}

TEST_CASE("annotation-only operators are not executable") {
  ProgramState s;
  for (const char* text : {"max(1, 2)", "log(8)"}) {
    CAPTURE(text);
    try {
      eval_aexp(parse_arith(text), s);
      FAIL("expected a non-executable error");
    } catch (const EvalError& e) {
      CHECK(e.kind() == EvalErrorKind::NonExecutable);
    }
  }
}

TEST_CASE("annotation evaluation adds max and floor log2") {
  ProgramState s = scalars("n", 8);
  CHECK(eval_annot(parse_arith("max(4, 9)"), s) == 9);
  CHECK(eval_annot(parse_arith("max(-3, -7)"), s) == -3);
  CHECK(eval_annot(parse_arith("log(n)"), s) == 3);
  CHECK(eval_annot(parse_arith("log(1)"), s) == 0);
  CHECK(eval_annot(parse_arith("log(7)"), s) == 2);
  CHECK(eval_annot(parse_arith("log(1024)"), s) == 10);
  try {
    eval_annot(parse_arith("log(0)"), s);
    FAIL("expected a log-domain error");
  } catch (const EvalError& e) {
    CHECK(e.kind() == EvalErrorKind::LogDomain);
  }
}

TEST_CASE("boolean evaluation covers every comparison and connective") {
  ProgramState s = scalars("x", 3, "y", 5);
  struct Case {
    const char* text;
    bool expected;
  };
  for (const Case& c : std::initializer_list<Case>{{"x = 3", true},
                                                   {"x != 3", false},
                                                   {"x < y", true},
                                                   {"x > y", false},
                                                   {"x <= 3", true},
                                                   {"x >= 4", false},
                                                   {"true", true},
                                                   {"false", false},
                                                   {"x < y and x = 3", true},
                                                   {"x > y or x = 3", true},
                                                   {"not (x = 3)", false}}) {
    CAPTURE(c.text);
    AssertPtr a = parse_assertion(c.text);
    CHECK(satisfies(a, s) == c.expected);
  }
}

TEST_CASE("quantifiers range over the configured finite domain") {
  ProgramState s;
  AssertPtr nonneg = parse_assertion("forall k. k >= 0");
  CHECK(satisfies(nonneg, s, QuantBounds{0, 4}));
  CHECK_FALSE(satisfies(nonneg, s, QuantBounds{-1, 4}));

  AssertPtr witness = parse_assertion("exists k. k = 3");
  CHECK(satisfies(witness, s, QuantBounds{0, 4}));
  CHECK_FALSE(satisfies(witness, s, QuantBounds{0, 2}));
}

TEST_CASE("the quantifier ceiling can track a state variable") {
  QuantBounds bounds;
  bounds.lo = 0;
  bounds.hi_var = "n";
  bounds.hi_offset = -1;
  ProgramState s = scalars("n", 3);
  CHECK(bounds.resolve_hi(s) == 2);
  s.set_cell("a", 0, 1);
  s.set_cell("a", 1, 2);
  s.set_cell("a", 2, 3);
  AssertPtr sorted = parse_assertion("forall i. (0 <= i and i < n - 1) => a[i] < a[i + 1]");
  CHECK(satisfies(sorted, s, bounds));
  s.set_cell("a", 1, 9);
  CHECK_FALSE(satisfies(sorted, s, bounds));
}

TEST_CASE("implication and nested quantifiers") {
  ProgramState s = scalars("n", 2);
  s.set_cell("a", 0, 1);
  s.set_cell("a", 1, 4);
  AssertPtr pairwise =
      parse_assertion("forall i. forall j. (0 <= i and i < j and j < n) => a[i] <= a[j]");
  CHECK(satisfies(pairwise, s, QuantBounds{0, 3}));
  s.set_cell("a", 0, 9);
  CHECK_FALSE(satisfies(pairwise, s, QuantBounds{0, 3}));
}

TEST_CASE("evaluation errors propagate out of satisfies") {
  ProgramState s;
  CHECK_THROWS_AS(satisfies(parse_assertion("1 / x = 1"), s), EvalError);
}

TEST_SUITE_END();
