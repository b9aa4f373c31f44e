#include "timebound/costsem.hpp"

namespace timebound {

namespace {

const Int* literal(const ArithPtr& e) {
  const auto* c = std::get_if<IntConst>(&e->node);
  return c ? &c->value : nullptr;
}

}  // namespace

ArithPtr fold_add(const ArithPtr& lhs, const ArithPtr& rhs) {
  const Int* l = literal(lhs);
  const Int* r = literal(rhs);
  if (l && r) return mk_int(*l + *r);
  return mk_add(lhs, rhs);
}

ArithPtr fold_sub(const ArithPtr& lhs, const ArithPtr& rhs) {
  const Int* l = literal(lhs);
  const Int* r = literal(rhs);
  if (l && r) return mk_int(*l - *r);
  return mk_sub(lhs, rhs);
}

ArithPtr fold_mul(const ArithPtr& lhs, const ArithPtr& rhs) {
  const Int* l = literal(lhs);
  const Int* r = literal(rhs);
  if (l && r) return mk_int(*l * *r);
  return mk_mul(lhs, rhs);
}

ArithPtr fold_max(const ArithPtr& lhs, const ArithPtr& rhs) {
  const Int* l = literal(lhs);
  const Int* r = literal(rhs);
  if (l && r) return mk_int(*l > *r ? *l : *r);
  return mk_max(lhs, rhs);
}

ArithPtr time_aexp(const ArithPtr& a, const CostModel& m, const CostSemOptions& opts) {
  return std::visit(
      [&](const auto& n) -> ArithPtr {
        using T = std::decay_t<decltype(n)>;
        if constexpr (std::is_same_v<T, IntConst>) {
          return mk_int(m.at("C_CST"));
        } else if constexpr (std::is_same_v<T, Var>) {
          return mk_int(m.at("C_VAR"));
        } else if constexpr (std::is_same_v<T, ArrRead>) {
          return fold_add(time_aexp(n.index, m, opts), mk_int(m.at("C_ARR")));
        } else if constexpr (std::is_same_v<T, ArithBin>) {
          const char* name = nullptr;
          switch (n.op) {
            case ArithOp::Add: name = "C_ADD"; break;
            case ArithOp::Sub: name = "C_SUB"; break;
            case ArithOp::Mul: name = "C_MUL"; break;
            case ArithOp::Div: name = "C_DIV"; break;
            case ArithOp::Pow: name = "C_POW"; break;
          }
          return fold_add(fold_add(time_aexp(n.lhs, m, opts), time_aexp(n.rhs, m, opts)),
                          mk_int(m.at(name)));
        } else if constexpr (std::is_same_v<T, MaxExpr> || std::is_same_v<T, LogTwo>) {
          throw EvalError(EvalErrorKind::NonExecutable,
                          "annotation-only operator has no execution cost");
        } else {
          static_assert(std::is_same_v<T, SumExpr>);
          ArithPtr span = fold_sub(n.upper, n.lower);
          ArithPtr iterations =
              opts.paper_sum_cost ? span : fold_max(fold_add(span, mk_int(1)), mk_int(0));
          return fold_mul(iterations, time_aexp(n.body, m, opts));
        }
      },
      a->node);
}

ArithPtr time_bexp(const BoolPtr& b, const CostModel& m, const CostSemOptions& opts) {
  return std::visit(
      [&](const auto& n) -> ArithPtr {
        using T = std::decay_t<decltype(n)>;
        if constexpr (std::is_same_v<T, BoolConst>) {
          return mk_int(m.at("C_CST"));
        } else if constexpr (std::is_same_v<T, Cmp>) {
          const char* name = nullptr;
          switch (n.op) {
            case CmpOp::Eq: name = "C_EQ"; break;
            case CmpOp::Neq: name = "C_NEQ"; break;
            case CmpOp::Lt: name = "C_LT"; break;
            case CmpOp::Gt: name = "C_GT"; break;
            case CmpOp::Le: name = "C_LE"; break;
            case CmpOp::Ge: name = "C_GE"; break;
          }
          return fold_add(fold_add(time_aexp(n.lhs, m, opts), time_aexp(n.rhs, m, opts)),
                          mk_int(m.at(name)));
        } else if constexpr (std::is_same_v<T, NotExpr>) {
          return fold_add(time_bexp(n.arg, m, opts), mk_int(m.at("C_NOT")));
        } else {
          static_assert(std::is_same_v<T, BoolBin>);
          return fold_add(fold_add(time_bexp(n.lhs, m, opts), time_bexp(n.rhs, m, opts)),
                          mk_int(m.at(n.op == BoolOp::And ? "C_AND" : "C_OR")));
        }
      },
      b->node);
}

Int cost_value(const ArithPtr& t, const ProgramState& state) { return eval_annot(t, state); }

}  // namespace timebound
