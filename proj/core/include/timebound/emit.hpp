#pragma once

#include "timebound/eval.hpp"
#include "timebound/vcg.hpp"

namespace timebound {

enum class GoalStatus { Unknown, Valid, Invalid, SolverError, Timeout };

std::string to_string(GoalStatus status);

/// One proof goal in both human-readable and SMT-LIB form. status stays
/// Unknown until a checker runs.
struct GoalDocument {
  std::string vc_name;
  std::string logic_text;
  std::string smt_text;
  GoalStatus status = GoalStatus::Unknown;
};

/// Universal closure of a formula over its free scalar variables, introduced
/// outermost-first in alphabetical order. Array names stay free: the
/// assertion syntax cannot quantify arrays.
AssertPtr close_formula(const AssertPtr& formula);

/// Human-readable form of a condition: the closed formula in the assertion
/// grammar, so it reparses.
std::string render_text(const VerificationCondition& vc);

/// Self-contained SMT-LIB goal. Free scalars become integer constants and
/// arrays become (Array Int Int) constants of the negated formula, so unsat
/// means the condition is valid. Division/power/max map to defined total
/// functions matching the evaluator (truncation toward zero; exponent <= 0
/// yields 1); log becomes an uninterpreted function with defining instances
/// for powers of two and for every concrete argument in the goal; sums with
/// small concrete ranges unroll and all others become per-shape recursive
/// definitions parameterized by their free variables.
std::string render_smt(const VerificationCondition& vc);

GoalDocument make_goal(const VerificationCondition& vc);

struct BruteOptions {
  Int lo = -8;
  Int hi = 8;
  /// Per-variable inclusive ranges overriding lo..hi.
  std::map<std::string, std::pair<Int, Int>> var_ranges;
  /// Give up (Unknown) above this many assignments.
  long long max_assignments = 5'000'000;
};

struct BruteResult {
  GoalStatus status = GoalStatus::Unknown;
  /// A falsifying assignment when status is Invalid.
  std::optional<ProgramState> counterexample;
};

/// Exhaustive validity check over a finite box: every free scalar ranges
/// over its declared interval, quantifiers range over lo..hi, assignments
/// that hit evaluation errors are skipped. Formulas mentioning arrays are
/// Unknown.
BruteResult brute_check(const VerificationCondition& vc, const BruteOptions& opts = {});

/// Pipes the goal into `solverCmd` (run through the shell, wrapped in
/// `timeout`) and maps the first sat/unsat/unknown token of its output:
/// unsat is Valid, sat is Invalid, unknown stays Unknown; exit by timeout is
/// Timeout and anything unparseable is SolverError. Never throws.
GoalDocument run_solver(GoalDocument goal, const std::string& solver_cmd, int timeout_sec);

}  // namespace timebound
