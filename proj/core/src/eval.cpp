#include "timebound/eval.hpp"

namespace timebound {

Int ProgramState::scalar(const std::string& name) const {
  auto it = scalars.find(name);
  return it == scalars.end() ? Int(0) : it->second;
}

void ProgramState::set_scalar(const std::string& name, Int value) {
  scalars[name] = std::move(value);
}

Int ProgramState::cell(const std::string& array, const Int& index) const {
  auto it = arrays.find(array);
  if (it == arrays.end()) return 0;
  auto cell_it = it->second.find(index);
  return cell_it == it->second.end() ? Int(0) : cell_it->second;
}

void ProgramState::set_cell(const std::string& array, const Int& index, Int value) {
  arrays[array][index] = std::move(value);
}

bool operator==(const ProgramState& a, const ProgramState& b) {
  auto scalars_covered = [](const ProgramState& lhs, const ProgramState& rhs) {
    for (const auto& [name, value] : lhs.scalars)
      if (rhs.scalar(name) != value) return false;
    return true;
  };
  auto cells_covered = [](const ProgramState& lhs, const ProgramState& rhs) {
    for (const auto& [array, cells] : lhs.arrays)
      for (const auto& [index, value] : cells)
        if (rhs.cell(array, index) != value) return false;
    return true;
  };
  return scalars_covered(a, b) && scalars_covered(b, a) && cells_covered(a, b) &&
         cells_covered(b, a);
}

std::string to_string(EvalErrorKind kind) {
  switch (kind) {
    case EvalErrorKind::DivByZero: return "division by zero";
    case EvalErrorKind::NegativeExponent: return "negative exponent";
    case EvalErrorKind::LogDomain: return "log of a non-positive number";
    case EvalErrorKind::NonExecutable: return "annotation-only operator in executable position";
    case EvalErrorKind::FuelExhausted: return "fuel exhausted";
  }
  return "unknown error";
}

namespace {

Int pow_int(const Int& base, const Int& exponent) {
  if (exponent < 0) throw EvalError(EvalErrorKind::NegativeExponent, "negative exponent in ^");
  Int result = 1;
  Int b = base;
  Int e = exponent;
  while (e > 0) {
    if ((e & 1) != 0) result *= b;
    e >>= 1;
    if (e > 0) b *= b;
  }
  return result;
}

Int floor_log2(const Int& value) {
  if (value <= 0)
    throw EvalError(EvalErrorKind::LogDomain, "log of a non-positive number");
  return static_cast<long long>(boost::multiprecision::msb(value));
}

/// Shared evaluator; annotation mode enables MaxExpr/LogTwo.
Int eval_arith(const ArithPtr& e, const ProgramState& state, bool annotation) {
  return std::visit(
      [&](const auto& n) -> Int {
        using T = std::decay_t<decltype(n)>;
        if constexpr (std::is_same_v<T, IntConst>) {
          return n.value;
        } else if constexpr (std::is_same_v<T, Var>) {
          return state.scalar(n.name);
        } else if constexpr (std::is_same_v<T, ArrRead>) {
          return state.cell(n.array, eval_arith(n.index, state, annotation));
        } else if constexpr (std::is_same_v<T, ArithBin>) {
          Int lhs = eval_arith(n.lhs, state, annotation);
          Int rhs = eval_arith(n.rhs, state, annotation);
          switch (n.op) {
            case ArithOp::Add: return lhs + rhs;
            case ArithOp::Sub: return lhs - rhs;
            case ArithOp::Mul: return lhs * rhs;
            case ArithOp::Div:
              if (rhs == 0) throw EvalError(EvalErrorKind::DivByZero, "division by zero");
              return lhs / rhs;  // cpp_int division truncates toward zero
            case ArithOp::Pow: return pow_int(lhs, rhs);
          }
          throw std::logic_error("unreachable arithmetic operator");
        } else if constexpr (std::is_same_v<T, MaxExpr>) {
          if (!annotation)
            throw EvalError(EvalErrorKind::NonExecutable, "max is not executable");
          Int lhs = eval_arith(n.lhs, state, annotation);
          Int rhs = eval_arith(n.rhs, state, annotation);
          return lhs > rhs ? lhs : rhs;
        } else if constexpr (std::is_same_v<T, LogTwo>) {
          if (!annotation)
            throw EvalError(EvalErrorKind::NonExecutable, "log is not executable");
          return floor_log2(eval_arith(n.arg, state, annotation));
        } else {
          static_assert(std::is_same_v<T, SumExpr>);
          Int lower = eval_arith(n.lower, state, annotation);
          Int upper = eval_arith(n.upper, state, annotation);
          Int total = 0;
          ProgramState local = state;
          for (Int i = lower; i <= upper; ++i) {
            local.set_scalar(n.binder, i);
            total += eval_arith(n.body, local, annotation);
          }
          return total;
        }
      },
      e->node);
}

}  // namespace

Int eval_aexp(const ArithPtr& e, const ProgramState& state) {
  return eval_arith(e, state, /*annotation=*/false);
}

Int eval_annot(const ArithPtr& e, const ProgramState& state) {
  return eval_arith(e, state, /*annotation=*/true);
}

bool eval_bexp(const BoolPtr& e, const ProgramState& state) {
  return std::visit(
      [&](const auto& n) -> bool {
        using T = std::decay_t<decltype(n)>;
        if constexpr (std::is_same_v<T, BoolConst>) {
          return n.value;
        } else if constexpr (std::is_same_v<T, Cmp>) {
          Int lhs = eval_aexp(n.lhs, state);
          Int rhs = eval_aexp(n.rhs, state);
          switch (n.op) {
            case CmpOp::Eq: return lhs == rhs;
            case CmpOp::Neq: return lhs != rhs;
            case CmpOp::Lt: return lhs < rhs;
            case CmpOp::Gt: return lhs > rhs;
            case CmpOp::Le: return lhs <= rhs;
            case CmpOp::Ge: return lhs >= rhs;
          }
          throw std::logic_error("unreachable comparison operator");
        } else if constexpr (std::is_same_v<T, NotExpr>) {
          return !eval_bexp(n.arg, state);
        } else {
          static_assert(std::is_same_v<T, BoolBin>);
          // Strict in both operands: the cost semantics charges both sides of
          // every connective, so evaluation must perform (and possibly fail
          // on) that work even when the left side already decides the result.
          bool lhs = eval_bexp(n.lhs, state);
          bool rhs = eval_bexp(n.rhs, state);
          switch (n.op) {
            case BoolOp::And: return lhs && rhs;
            case BoolOp::Or: return lhs || rhs;
          }
          throw std::logic_error("unreachable boolean operator");
        }
      },
      e->node);
}

Int QuantBounds::resolve_hi(const ProgramState& state) const {
  if (!hi_var) return hi;
  return state.scalar(*hi_var) + hi_offset;
}

bool satisfies(const AssertPtr& a, const ProgramState& state, const QuantBounds& bounds) {
  return std::visit(
      [&](const auto& n) -> bool {
        using T = std::decay_t<decltype(n)>;
        if constexpr (std::is_same_v<T, ABool>) {
          return n.value;
        } else if constexpr (std::is_same_v<T, ACmp>) {
          Int lhs = eval_annot(n.lhs, state);
          Int rhs = eval_annot(n.rhs, state);
          switch (n.op) {
            case CmpOp::Eq: return lhs == rhs;
            case CmpOp::Neq: return lhs != rhs;
            case CmpOp::Lt: return lhs < rhs;
            case CmpOp::Gt: return lhs > rhs;
            case CmpOp::Le: return lhs <= rhs;
            case CmpOp::Ge: return lhs >= rhs;
          }
          throw std::logic_error("unreachable comparison operator");
        } else if constexpr (std::is_same_v<T, ANot>) {
          return !satisfies(n.arg, state, bounds);
        } else if constexpr (std::is_same_v<T, ABin>) {
          switch (n.op) {
            case AConn::And:
              return satisfies(n.lhs, state, bounds) && satisfies(n.rhs, state, bounds);
            case AConn::Or:
              return satisfies(n.lhs, state, bounds) || satisfies(n.rhs, state, bounds);
            case AConn::Implies:
              return !satisfies(n.lhs, state, bounds) || satisfies(n.rhs, state, bounds);
          }
          throw std::logic_error("unreachable connective");
        } else {
          static_assert(std::is_same_v<T, AQuant>);
          Int hi = bounds.resolve_hi(state);
          ProgramState local = state;
          for (Int i = bounds.lo; i <= hi; ++i) {
            local.set_scalar(n.binder, i);
            bool holds = satisfies(n.body, local, bounds);
            if (n.quant == Quant::Forall && !holds) return false;
            if (n.quant == Quant::Exists && holds) return true;
          }
          return n.quant == Quant::Forall;
        }
      },
      a->node);
}

}  // namespace timebound
