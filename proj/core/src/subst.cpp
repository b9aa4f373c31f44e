#include "timebound/subst.hpp"

#include <stdexcept>
#include <utility>
#include <vector>

namespace timebound {

namespace {

std::set<std::string> avoid_for_rename(const std::string& binder, const std::set<std::string>& extra,
                                       const std::set<std::string>& body_ids) {
  std::set<std::string> avoid = body_ids;
  avoid.insert(extra.begin(), extra.end());
  avoid.insert(binder);
  return avoid;
}

}  // namespace

ArithPtr subst_aexp(const ArithPtr& e, const std::string& var, const ArithPtr& replacement) {
  struct V {
    const std::string& var;
    const ArithPtr& repl;

    ArithPtr operator()(const ArithPtr& e) const {
      return std::visit([&](const auto& n) { return visit(e, n); }, e->node);
    }
    ArithPtr visit(const ArithPtr& e, const IntConst&) const { return e; }
    ArithPtr visit(const ArithPtr& e, const Var& n) const {
      return n.name == var ? repl : e;
    }
    ArithPtr visit(const ArithPtr&, const ArrRead& n) const {
      return mk_arr_read(n.array, (*this)(n.index));
    }
    ArithPtr visit(const ArithPtr&, const ArithBin& n) const {
      return mk_bin(n.op, (*this)(n.lhs), (*this)(n.rhs));
    }
    ArithPtr visit(const ArithPtr&, const MaxExpr& n) const {
      return mk_max((*this)(n.lhs), (*this)(n.rhs));
    }
    ArithPtr visit(const ArithPtr&, const LogTwo& n) const { return mk_log2((*this)(n.arg)); }
    ArithPtr visit(const ArithPtr&, const SumExpr& n) const {
      ArithPtr lower = (*this)(n.lower);
      ArithPtr upper = (*this)(n.upper);
      if (n.binder == var) return mk_sum(n.binder, lower, upper, n.body);
      std::string binder = n.binder;
      ArithPtr body = n.body;
      if (free_vars(repl).count(binder) && free_vars(body).count(var)) {
        std::set<std::string> body_ids;
        collect_identifiers(body, body_ids);
        std::string renamed =
            fresh_name(binder + "'", avoid_for_rename(binder, free_vars(repl), body_ids));
        body = subst_aexp(body, binder, mk_var(renamed));
        binder = renamed;
      }
      return mk_sum(binder, lower, upper, (*this)(body));
    }
  };
  return V{var, replacement}(e);
}

BoolPtr subst_bexp(const BoolPtr& e, const std::string& var, const ArithPtr& replacement) {
  struct V {
    const std::string& var;
    const ArithPtr& repl;

    BoolPtr operator()(const BoolPtr& e) const {
      return std::visit([&](const auto& n) { return visit(e, n); }, e->node);
    }
    BoolPtr visit(const BoolPtr& e, const BoolConst&) const { return e; }
    BoolPtr visit(const BoolPtr&, const Cmp& n) const {
      return mk_cmp(n.op, subst_aexp(n.lhs, var, repl), subst_aexp(n.rhs, var, repl));
    }
    BoolPtr visit(const BoolPtr&, const NotExpr& n) const { return mk_not((*this)(n.arg)); }
    BoolPtr visit(const BoolPtr&, const BoolBin& n) const {
      return mk_bbin(n.op, (*this)(n.lhs), (*this)(n.rhs));
    }
  };
  return V{var, replacement}(e);
}

AssertPtr subst_assertion(const AssertPtr& a, const std::string& var, const ArithPtr& replacement) {
  struct V {
    const std::string& var;
    const ArithPtr& repl;

    AssertPtr operator()(const AssertPtr& a) const {
      return std::visit([&](const auto& n) { return visit(a, n); }, a->node);
    }
    AssertPtr visit(const AssertPtr& a, const ABool&) const { return a; }
    AssertPtr visit(const AssertPtr&, const ACmp& n) const {
      return mk_acmp(n.op, subst_aexp(n.lhs, var, repl), subst_aexp(n.rhs, var, repl));
    }
    AssertPtr visit(const AssertPtr&, const ANot& n) const { return mk_anot((*this)(n.arg)); }
    AssertPtr visit(const AssertPtr&, const ABin& n) const {
      return mk_abin(n.op, (*this)(n.lhs), (*this)(n.rhs));
    }
    AssertPtr visit(const AssertPtr& a, const AQuant& n) const {
      if (n.binder == var) return a;
      std::string binder = n.binder;
      AssertPtr body = n.body;
      if (free_vars(repl).count(binder) && free_vars(body).count(var)) {
        std::set<std::string> body_ids;
        collect_identifiers(body, body_ids);
        std::string renamed =
            fresh_name(binder + "'", avoid_for_rename(binder, free_vars(repl), body_ids));
        body = subst_assertion(body, binder, mk_var(renamed));
        binder = renamed;
      }
      return mk_quant(n.quant, binder, (*this)(body));
    }
  };
  return V{var, replacement}(a);
}

namespace {

/// One way an expression can resolve once reads of the written array are
/// split on index (dis)equality: the expression's value under the
/// conjunction of the guard atoms.
struct ReadBranch {
  std::vector<AssertPtr> guards;
  ArithPtr expr;
};

struct ArrayWrite {
  const std::string& array;
  const ArithPtr& index;
  const ArithPtr& value;
};

bool reads_array(const ArithPtr& e, const std::string& array) {
  return array_names(e).count(array) != 0;
}

/// The range-split rewrite of a sum only works when every read of the
/// written array inside the body is exactly array[binder]; nested sums that
/// read the array would need their own split and are rejected.
bool sum_body_splittable(const ArithPtr& e, const std::string& array, const std::string& binder) {
  return std::visit(
      [&](const auto& n) -> bool {
        using T = std::decay_t<decltype(n)>;
        if constexpr (std::is_same_v<T, IntConst> || std::is_same_v<T, Var>) {
          return true;
        } else if constexpr (std::is_same_v<T, ArrRead>) {
          if (n.array != array) return sum_body_splittable(n.index, array, binder);
          return std::holds_alternative<Var>(n.index->node) &&
                 std::get<Var>(n.index->node).name == binder;
        } else if constexpr (std::is_same_v<T, ArithBin> || std::is_same_v<T, MaxExpr>) {
          return sum_body_splittable(n.lhs, array, binder) &&
                 sum_body_splittable(n.rhs, array, binder);
        } else if constexpr (std::is_same_v<T, LogTwo>) {
          return sum_body_splittable(n.arg, array, binder);
        } else {
          static_assert(std::is_same_v<T, SumExpr>);
          return !reads_array(mk_sum(n.binder, n.lower, n.upper, n.body), array);
        }
      },
      e->node);
}

std::vector<ReadBranch> append_guards(std::vector<ReadBranch> branches,
                                      const std::vector<AssertPtr>& guards) {
  for (auto& b : branches)
    b.guards.insert(b.guards.begin(), guards.begin(), guards.end());
  return branches;
}

std::vector<ReadBranch> read_branches(const ArithPtr& e, const ArrayWrite& w);

std::vector<ReadBranch> cross_branches(const ArithPtr& lhs, const ArithPtr& rhs,
                                       const ArrayWrite& w,
                                       ArithPtr (*make)(ArithPtr, ArithPtr)) {
  std::vector<ReadBranch> out;
  for (const auto& lb : read_branches(lhs, w)) {
    for (const auto& rb : read_branches(rhs, w)) {
      std::vector<AssertPtr> guards = lb.guards;
      guards.insert(guards.end(), rb.guards.begin(), rb.guards.end());
      out.push_back({std::move(guards), make(lb.expr, rb.expr)});
    }
  }
  return out;
}

std::vector<ReadBranch> read_branches(const ArithPtr& e, const ArrayWrite& w) {
  return std::visit(
      [&](const auto& n) -> std::vector<ReadBranch> {
        using T = std::decay_t<decltype(n)>;
        if constexpr (std::is_same_v<T, IntConst> || std::is_same_v<T, Var>) {
          return {{{}, e}};
        } else if constexpr (std::is_same_v<T, ArrRead>) {
          std::vector<ReadBranch> out;
          for (const auto& ib : read_branches(n.index, w)) {
            if (n.array != w.array) {
              out.push_back({ib.guards, mk_arr_read(n.array, ib.expr)});
            } else if (equal(ib.expr, w.index)) {
              out.push_back({ib.guards, w.value});
            } else {
              std::vector<AssertPtr> hit = ib.guards;
              hit.push_back(mk_acmp(CmpOp::Eq, w.index, ib.expr));
              out.push_back({std::move(hit), w.value});
              std::vector<AssertPtr> miss = ib.guards;
              miss.push_back(mk_acmp(CmpOp::Neq, w.index, ib.expr));
              out.push_back({std::move(miss), mk_arr_read(n.array, ib.expr)});
            }
          }
          return out;
        } else if constexpr (std::is_same_v<T, ArithBin>) {
          switch (n.op) {
            case ArithOp::Add: return cross_branches(n.lhs, n.rhs, w, mk_add);
            case ArithOp::Sub: return cross_branches(n.lhs, n.rhs, w, mk_sub);
            case ArithOp::Mul: return cross_branches(n.lhs, n.rhs, w, mk_mul);
            case ArithOp::Div: return cross_branches(n.lhs, n.rhs, w, mk_div);
            case ArithOp::Pow: return cross_branches(n.lhs, n.rhs, w, mk_pow);
          }
          throw std::logic_error("unreachable arithmetic operator");
        } else if constexpr (std::is_same_v<T, MaxExpr>) {
          return cross_branches(n.lhs, n.rhs, w, mk_max);
        } else if constexpr (std::is_same_v<T, LogTwo>) {
          std::vector<ReadBranch> out;
          for (const auto& ab : read_branches(n.arg, w))
            out.push_back({ab.guards, mk_log2(ab.expr)});
          return out;
        } else {
          static_assert(std::is_same_v<T, SumExpr>);
          // A guard about a read under the sum binder cannot scope to the
          // enclosing atom. When every read of the written array is at the
          // binder itself, split on whether the write index lies in the
          // range: inside it shifts the sum by the one rewritten term,
          // outside the sum is untouched.
          std::string binder = n.binder;
          ArithPtr body = n.body;
          bool body_reads = reads_array(body, w.array);
          if (body_reads) {
            std::set<std::string> outside = free_vars(w.index);
            const std::set<std::string> value_vars = free_vars(w.value);
            outside.insert(value_vars.begin(), value_vars.end());
            if (outside.count(binder)) {
              std::set<std::string> body_ids;
              collect_identifiers(body, body_ids);
              std::string renamed =
                  fresh_name(binder + "'", avoid_for_rename(binder, outside, body_ids));
              body = subst_aexp(body, binder, mk_var(renamed));
              binder = renamed;
            }
            if (!sum_body_splittable(body, w.array, binder))
              throw std::runtime_error(
                  "array substitution under a sum supports reads of the written array only at "
                  "the sum binder");
          }
          std::vector<ReadBranch> out;
          for (const auto& lb : read_branches(n.lower, w)) {
            for (const auto& ub : read_branches(n.upper, w)) {
              std::vector<AssertPtr> guards = lb.guards;
              guards.insert(guards.end(), ub.guards.begin(), ub.guards.end());
              ArithPtr sum = mk_sum(binder, lb.expr, ub.expr, body);
              if (!body_reads) {
                out.push_back({std::move(guards), sum});
                continue;
              }
              ArithPtr at_index = subst_aexp(body, binder, w.index);
              AssertPtr in_range = mk_and(mk_acmp(CmpOp::Le, lb.expr, w.index),
                                          mk_acmp(CmpOp::Le, w.index, ub.expr));
              for (const auto& tb : read_branches(at_index, w)) {
                std::vector<AssertPtr> hit = guards;
                hit.push_back(in_range);
                hit.insert(hit.end(), tb.guards.begin(), tb.guards.end());
                out.push_back({std::move(hit), mk_add(mk_sub(sum, at_index), tb.expr)});
              }
              std::vector<AssertPtr> miss = std::move(guards);
              miss.push_back(mk_anot(in_range));
              out.push_back({std::move(miss), sum});
            }
          }
          return out;
        }
      },
      e->node);
}

AssertPtr guarded_atom(CmpOp op, const ArithPtr& lhs, const ArithPtr& rhs, const ArrayWrite& w) {
  std::vector<AssertPtr> cases;
  for (const auto& lb : read_branches(lhs, w)) {
    for (const auto& rb : read_branches(rhs, w)) {
      AssertPtr atom = mk_acmp(op, lb.expr, rb.expr);
      std::vector<AssertPtr> guards = lb.guards;
      guards.insert(guards.end(), rb.guards.begin(), rb.guards.end());
      if (guards.empty()) {
        cases.push_back(atom);
        continue;
      }
      AssertPtr guard = guards.front();
      for (std::size_t i = 1; i < guards.size(); ++i) guard = mk_and(guard, guards[i]);
      cases.push_back(mk_implies(guard, atom));
    }
  }
  AssertPtr result = cases.front();
  for (std::size_t i = 1; i < cases.size(); ++i) result = mk_and(result, cases[i]);
  return result;
}

}  // namespace

AssertPtr subst_array(const AssertPtr& a, const std::string& array, const ArithPtr& index,
                      const ArithPtr& value) {
  struct V {
    const std::string& array;
    const ArithPtr& index;
    const ArithPtr& value;

    AssertPtr operator()(const AssertPtr& a) const {
      return std::visit([&](const auto& n) { return visit(a, n); }, a->node);
    }
    AssertPtr visit(const AssertPtr& a, const ABool&) const { return a; }
    AssertPtr visit(const AssertPtr& a, const ACmp& n) const {
      if (!reads_array(n.lhs, array) && !reads_array(n.rhs, array)) return a;
      return guarded_atom(n.op, n.lhs, n.rhs, ArrayWrite{array, index, value});
    }
    AssertPtr visit(const AssertPtr&, const ANot& n) const { return mk_anot((*this)(n.arg)); }
    AssertPtr visit(const AssertPtr&, const ABin& n) const {
      return mk_abin(n.op, (*this)(n.lhs), (*this)(n.rhs));
    }
    AssertPtr visit(const AssertPtr& a, const AQuant& n) const {
      std::string binder = n.binder;
      AssertPtr body = n.body;
      std::set<std::string> outside = free_vars(index);
      const std::set<std::string> value_vars = free_vars(value);
      outside.insert(value_vars.begin(), value_vars.end());
      if (outside.count(binder)) {
        std::set<std::string> body_ids;
        collect_identifiers(body, body_ids);
        std::string renamed =
            fresh_name(binder + "'", avoid_for_rename(binder, outside, body_ids));
        body = subst_assertion(body, binder, mk_var(renamed));
        binder = renamed;
      }
      return mk_quant(n.quant, binder, (*this)(body));
    }
  };
  return V{array, index, value}(a);
}

}  // namespace timebound
