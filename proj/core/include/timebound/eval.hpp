#pragma once

#include <optional>
#include <stdexcept>

#include "timebound/ast.hpp"

namespace timebound {

/// A program state: total maps from scalar names and array cells to
/// integers. Anything never written reads as 0, so two states are equal when
/// they agree as total functions, regardless of which entries are stored
/// explicitly.
struct ProgramState {
  std::map<std::string, Int> scalars;
  std::map<std::string, std::map<Int, Int>> arrays;

  Int scalar(const std::string& name) const;
  void set_scalar(const std::string& name, Int value);
  Int cell(const std::string& array, const Int& index) const;
  void set_cell(const std::string& array, const Int& index, Int value);
};

bool operator==(const ProgramState& a, const ProgramState& b);
inline bool operator!=(const ProgramState& a, const ProgramState& b) { return !(a == b); }

enum class EvalErrorKind {
  DivByZero,
  NegativeExponent,
  LogDomain,
  NonExecutable,
  FuelExhausted,
};

std::string to_string(EvalErrorKind kind);

/// Raised by expression evaluation and execution. The span is meaningful
/// when the error surfaced while executing a statement; expression-level
/// throws leave it zero and the interpreter fills it in.
class EvalError : public std::runtime_error {
 public:
  EvalError(EvalErrorKind kind, const std::string& message, SourceSpan span = {})
      : std::runtime_error(message), kind_(kind), span_(span) {}

  EvalErrorKind kind() const { return kind_; }
  SourceSpan span() const { return span_; }
  void set_span(SourceSpan span) { span_ = span; }

 private:
  EvalErrorKind kind_;
  SourceSpan span_;
};

/// Value of an executable arithmetic expression. Division truncates toward
/// zero and throws on zero divisors; Pow throws on negative exponents with
/// 0^0 = 1; sums iterate the binder from lower to upper inclusive (empty
/// when upper < lower). MaxExpr/LogTwo are annotation-only and throw
/// NonExecutable here.
Int eval_aexp(const ArithPtr& e, const ProgramState& state);

/// Truth value of a boolean condition; arithmetic errors propagate.
bool eval_bexp(const BoolPtr& e, const ProgramState& state);

/// Value of an annotation expression: like eval_aexp but MaxExpr is integer
/// max and LogTwo is floor log2 (throws LogDomain unless the argument is
/// positive).
Int eval_annot(const ArithPtr& e, const ProgramState& state);

/// Finite domain used for quantifier instantiation when checking assertion
/// satisfaction. Binders range over lo..hi inclusive; hi may instead track a
/// state variable plus an offset (e.g. 0..n-1), resolved per state.
struct QuantBounds {
  Int lo = 0;
  Int hi = 16;
  std::optional<std::string> hi_var;
  Int hi_offset = 0;

  Int resolve_hi(const ProgramState& state) const;
};

/// Satisfaction of an assertion in a state, with quantifiers ranging over
/// the finite domain in bounds. Arithmetic errors propagate.
bool satisfies(const AssertPtr& a, const ProgramState& state, const QuantBounds& bounds = {});

}  // namespace timebound
