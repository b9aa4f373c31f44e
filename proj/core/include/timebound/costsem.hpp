#pragma once

#include "timebound/ast.hpp"
#include "timebound/eval.hpp"

namespace timebound {

/// Policy switches for the symbolic cost semantics.
struct CostSemOptions {
  /// Charge a sum as (upper - lower) body evaluations instead of the default
  /// max(upper - lower + 1, 0), which matches the inclusive evaluation rule.
  bool paper_sum_cost = false;
};

/// Addition/subtraction/multiplication and max with literal constant
/// folding, so sum-free cost expressions come out as a single IntConst. No
/// other simplification is performed.
ArithPtr fold_add(const ArithPtr& lhs, const ArithPtr& rhs);
ArithPtr fold_sub(const ArithPtr& lhs, const ArithPtr& rhs);
ArithPtr fold_mul(const ArithPtr& lhs, const ArithPtr& rhs);
ArithPtr fold_max(const ArithPtr& lhs, const ArithPtr& rhs);

/// Symbolic cost of evaluating an arithmetic expression: one atomic cost per
/// grammar rule (C_CST, C_VAR, C_ARR + index, operator costs), and for sums
/// the per-evaluation body cost multiplied by the iteration count. Constants
/// fold, so the result is a literal whenever no sum has symbolic bounds.
/// Throws EvalError(NonExecutable) on MaxExpr/LogTwo, which have no
/// execution cost because they cannot be executed.
ArithPtr time_aexp(const ArithPtr& a, const CostModel& m, const CostSemOptions& opts = {});

/// Symbolic cost of evaluating a boolean condition.
ArithPtr time_bexp(const BoolPtr& b, const CostModel& m, const CostSemOptions& opts = {});

/// Numeric value of a symbolic cost (or any annotation expression) in a
/// state.
Int cost_value(const ArithPtr& t, const ProgramState& state);

}  // namespace timebound
