#pragma once

#include <functional>

#include "timebound/ast.hpp"
#include "timebound/costsem.hpp"
#include "timebound/eval.hpp"

namespace timebound {

/// Result of a completed execution: the final state, the exact cost summed
/// over every rule applied, and the number of rule applications.
struct ExecOutcome {
  ProgramState state;
  Int cost;
  long long steps = 0;
};

/// Observation points used by the test harness to instrument executions
/// without changing the semantics. All callbacks are optional.
struct ExecHooks {
  /// Before an if statement runs: the statement and the pre-state.
  std::function<void(const Stmt&, const ProgramState&)> on_if;
  /// When a loop is entered, before the first condition evaluation.
  std::function<void(int loop_id, const ProgramState& entry)> on_loop_enter;
  /// After each completed loop iteration: 0-based iteration number, the
  /// states before and after the body, and the exact cost of the body.
  std::function<void(int loop_id, long long iteration, const ProgramState& before,
                     const ProgramState& after, const Int& body_cost)>
      on_loop_iter;
};

struct ExecOptions {
  /// Maximum number of loop iterations across the whole run.
  long long fuel = 1'000'000;
  CostSemOptions costsem;
  const ExecHooks* hooks = nullptr;
};

/// Cost-instrumented big-step execution. Charges per rule: C_SKIP for skip;
/// expression time plus C_ASSIGN_V / C_ASSIGN_A for assignments; condition
/// time plus the taken branch for if; condition time per evaluation plus
/// body time per iteration for while; for a for loop, each round charges the
/// `current < upper` test and, when it enters, the literal-plus-assignment
/// cost of setting the binder. Throws EvalError on arithmetic errors (with
/// the statement's span) and on fuel exhaustion.
ExecOutcome exec(const StmtPtr& s, const ProgramState& initial, const CostModel& m,
                 const ExecOptions& options = {});

}  // namespace timebound
