#include "timebound/interp.hpp"

namespace timebound {

namespace {

class Execution {
 public:
  Execution(const CostModel& m, const ExecOptions& opts)
      : model_(m), opts_(opts), fuel_left_(opts.fuel) {}

  Int run(const StmtPtr& s, ProgramState& state) {
    ++steps_;
    try {
      return std::visit([&](const auto& n) { return visit(s, n, state); }, s->node);
    } catch (EvalError& e) {
      if (e.span().line == 0) e.set_span(s->span);
      throw;
    }
  }

  long long steps() const { return steps_; }

 private:
  Int time_of(const ArithPtr& a, const ProgramState& state) const {
    return cost_value(time_aexp(a, model_, opts_.costsem), state);
  }
  Int time_of(const BoolPtr& b, const ProgramState& state) const {
    return cost_value(time_bexp(b, model_, opts_.costsem), state);
  }

  void consume_fuel(const StmtPtr& s) {
    if (fuel_left_ == 0)
      throw EvalError(EvalErrorKind::FuelExhausted,
                      "fuel exhausted after " + std::to_string(opts_.fuel) + " loop iterations",
                      s->span);
    --fuel_left_;
  }

  Int visit(const StmtPtr&, const Skip&, ProgramState&) { return model_.at("C_SKIP"); }

  Int visit(const StmtPtr&, const Assign& n, ProgramState& state) {
    Int cost = time_of(n.value, state) + model_.at("C_ASSIGN_V");
    state.set_scalar(n.var, eval_aexp(n.value, state));
    return cost;
  }

  Int visit(const StmtPtr&, const ArrAssign& n, ProgramState& state) {
    Int cost = time_of(n.index, state) + time_of(n.value, state) + model_.at("C_ASSIGN_A");
    Int index = eval_aexp(n.index, state);
    state.set_cell(n.array, index, eval_aexp(n.value, state));
    return cost;
  }

  Int visit(const StmtPtr&, const SeqStmt& n, ProgramState& state) {
    Int first = run(n.first, state);
    return first + run(n.second, state);
  }

  Int visit(const StmtPtr& s, const IfStmt& n, ProgramState& state) {
    if (opts_.hooks && opts_.hooks->on_if) opts_.hooks->on_if(*s, state);
    Int cost = time_of(n.cond, state);
    bool taken = eval_bexp(n.cond, state);
    return cost + run(taken ? n.then_branch : n.else_branch, state);
  }

  Int visit(const StmtPtr& s, const WhileStmt& n, ProgramState& state) {
    const bool observe = opts_.hooks && opts_.hooks->on_loop_iter;
    if (opts_.hooks && opts_.hooks->on_loop_enter) opts_.hooks->on_loop_enter(n.loop_id, state);
    Int total = 0;
    long long iteration = 0;
    while (true) {
      total += time_of(n.cond, state);
      if (!eval_bexp(n.cond, state)) return total;
      consume_fuel(s);
      ProgramState before;
      if (observe) before = state;
      Int body_cost = run(n.body, state);
      total += body_cost;
      if (observe) opts_.hooks->on_loop_iter(n.loop_id, iteration, before, state, body_cost);
      ++iteration;
    }
  }

  Int visit(const StmtPtr& s, const ForStmt& n, ProgramState& state) {
    const bool observe = opts_.hooks && opts_.hooks->on_loop_iter;
    if (opts_.hooks && opts_.hooks->on_loop_enter) opts_.hooks->on_loop_enter(n.loop_id, state);
    Int total = 0;
    Int current = n.lower;
    long long iteration = 0;
    while (true) {
      // The unfolded test is `current < upper` with the current counter as a
      // literal, so its cost is C_CST + time(upper) + C_LT each round.
      total += model_.at("C_CST") + time_of(n.upper, state) + model_.at("C_LT");
      if (!(current < eval_aexp(n.upper, state))) return total;
      consume_fuel(s);
      total += model_.at("C_CST") + model_.at("C_ASSIGN_V");
      state.set_scalar(n.binder, current);
      ProgramState before;
      if (observe) before = state;
      Int body_cost = run(n.body, state);
      total += body_cost;
      if (observe) opts_.hooks->on_loop_iter(n.loop_id, iteration, before, state, body_cost);
      ++current;
      ++iteration;
    }
  }

  const CostModel& model_;
  const ExecOptions& opts_;
  long long fuel_left_;
  long long steps_ = 0;
};

}  // namespace

ExecOutcome exec(const StmtPtr& s, const ProgramState& initial, const CostModel& m,
                 const ExecOptions& options) {
  Execution execution(m, options);
  ExecOutcome outcome;
  outcome.state = initial;
  outcome.cost = execution.run(s, outcome.state);
  outcome.steps = execution.steps();
  return outcome;
}

}  // namespace timebound
