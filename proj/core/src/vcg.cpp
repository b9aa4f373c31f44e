#include "timebound/vcg.hpp"

#include "timebound/subst.hpp"

namespace timebound {

std::string to_string(Provenance provenance) {
  switch (provenance) {
    case Provenance::Correctness: return "correctness";
    case Provenance::CostBound: return "cost-bound";
    case Provenance::InvariantPreservation: return "invariant-preservation";
    case Provenance::LoopExit: return "loop-exit";
    case Provenance::TerminationBound: return "termination-bound";
    case Provenance::PotentialNonneg: return "potential-nonneg";
    case Provenance::AmortizedCost: return "amortized-cost";
    case Provenance::ExactBranchBalance: return "exact-branch-balance";
    case Provenance::ExitImpliesPost: return "exit-implies-post";
  }
  return "unknown";
}

namespace {

struct VcgContext {
  VerifMode mode;
  const CostModel& m;
  const std::map<int, OracleInfo>& oracle;
  const VcgOptions& opts;
};

const OracleInfo& require_oracle(const VcgContext& ctx, int loop_id) {
  auto it = ctx.oracle.find(loop_id);
  if (it == ctx.oracle.end())
    throw OracleError(loop_id, "loop " + std::to_string(loop_id) + ": no oracle annotations");
  return it->second;
}

[[noreturn]] void missing_field(int loop_id, const char* field) {
  throw OracleError(loop_id,
                    "loop " + std::to_string(loop_id) + ": missing " + field + " annotation");
}

WpResult wpc_rec(const VcgContext& ctx, const StmtPtr& s, const AssertPtr& post) {
  return std::visit(
      [&](const auto& n) -> WpResult {
        using T = std::decay_t<decltype(n)>;
        if constexpr (std::is_same_v<T, Skip>) {
          return {post, mk_int(ctx.m.at("C_SKIP"))};
        } else if constexpr (std::is_same_v<T, Assign>) {
          return {subst_assertion(post, n.var, n.value),
                  fold_add(time_aexp(n.value, ctx.m, ctx.opts.costsem),
                           mk_int(ctx.m.at("C_ASSIGN_V")))};
        } else if constexpr (std::is_same_v<T, ArrAssign>) {
          return {subst_array(post, n.array, n.index, n.value),
                  fold_add(fold_add(time_aexp(n.index, ctx.m, ctx.opts.costsem),
                                    time_aexp(n.value, ctx.m, ctx.opts.costsem)),
                           mk_int(ctx.m.at("C_ASSIGN_A")))};
        } else if constexpr (std::is_same_v<T, SeqStmt>) {
          WpResult second = wpc_rec(ctx, n.second, post);
          WpResult first = wpc_rec(ctx, n.first, second.wp);
          return {first.wp, fold_add(first.cost, second.cost)};
        } else if constexpr (std::is_same_v<T, IfStmt>) {
          WpResult then_r = wpc_rec(ctx, n.then_branch, post);
          WpResult else_r = wpc_rec(ctx, n.else_branch, post);
          AssertPtr cond = to_assertion(n.cond);
          ArithPtr cond_time = time_bexp(n.cond, ctx.m, ctx.opts.costsem);
          AssertPtr branches = mk_and(mk_implies(cond, then_r.wp),
                                      mk_implies(mk_anot(cond), else_r.wp));
          if (ctx.mode == VerifMode::Exact) {
            // Exact costs require the branches to cost the same, recorded as
            // a side condition inside the weakest precondition.
            return {mk_and(branches, mk_acmp(CmpOp::Eq, then_r.cost, else_r.cost)),
                    fold_add(then_r.cost, cond_time)};
          }
          ArithPtr branch_cost = ctx.opts.if_cost_sum ? fold_add(then_r.cost, else_r.cost)
                                                      : fold_max(then_r.cost, else_r.cost);
          return {branches, fold_add(branch_cost, cond_time)};
        } else if constexpr (std::is_same_v<T, WhileStmt>) {
          if (ctx.mode == VerifMode::Exact)
            throw std::invalid_argument("while loops are not supported by the exact calculus");
          const OracleInfo& info = require_oracle(ctx, n.loop_id);
          if (!info.invariant) missing_field(n.loop_id, "invariant");
          if (!info.variant) missing_field(n.loop_id, "variant");
          if (!info.iter_bound) missing_field(n.loop_id, "bound");
          ArithPtr cond_time = time_bexp(n.cond, ctx.m, ctx.opts.costsem);
          ArithPtr rounds = fold_mul(fold_add(info.iter_bound, mk_int(1)), cond_time);
          AssertPtr variant_ok = mk_acmp(CmpOp::Ge, info.variant, mk_int(0));
          if (ctx.mode == VerifMode::Classic) {
            if (!info.cost_fn) missing_field(n.loop_id, "cost");
            ArithPtr per_iter = mk_sum(info.cost_fn->binder, mk_int(0),
                                       fold_sub(info.iter_bound, mk_int(1)),
                                       info.cost_fn->body);
            return {mk_and(info.invariant, variant_ok), fold_add(per_iter, rounds)};
          }
          if (!info.amortized_cost) missing_field(n.loop_id, "amortized");
          if (!info.potential) missing_field(n.loop_id, "potential");
          AssertPtr wp = mk_and(mk_and(info.invariant, variant_ok),
                                mk_acmp(CmpOp::Eq, info.potential, mk_int(0)));
          return {wp, fold_add(fold_mul(info.iter_bound, info.amortized_cost), rounds)};
        } else {
          static_assert(std::is_same_v<T, ForStmt>);
          if (ctx.mode != VerifMode::Exact)
            throw std::invalid_argument("for loops require the exact calculus");
          const OracleInfo& info = require_oracle(ctx, n.loop_id);
          if (!info.invariant) missing_field(n.loop_id, "invariant");
          AssertPtr body_post =
              subst_assertion(info.invariant, n.binder, mk_add(mk_var(n.binder), mk_int(1)));
          WpResult body = wpc_rec(ctx, n.body, body_post);
          ArithPtr span = fold_sub(n.upper, mk_int(n.lower));
          ArithPtr per_iter = fold_add(
              fold_add(mk_int(ctx.m.at("C_CST")), mk_int(ctx.m.at("C_ASSIGN_V"))), body.cost);
          ArithPtr cond_time =
              time_bexp(mk_cmp(CmpOp::Lt, mk_int(n.lower), n.upper), ctx.m, ctx.opts.costsem);
          ArithPtr cost = fold_add(fold_mul(span, per_iter),
                                   fold_mul(fold_add(span, mk_int(1)), cond_time));
          return {subst_assertion(info.invariant, n.binder, mk_int(n.lower)), cost};
        }
      },
      s->node);
}

void vc_rec(const VcgContext& ctx, const StmtPtr& s, const AssertPtr& post,
            std::set<std::string>& avoid, std::vector<VerificationCondition>& out) {
  std::visit(
      [&](const auto& n) {
        using T = std::decay_t<decltype(n)>;
        if constexpr (std::is_same_v<T, Skip> || std::is_same_v<T, Assign> ||
                      std::is_same_v<T, ArrAssign>) {
          // Atomic statements contribute no conditions of their own.
        } else if constexpr (std::is_same_v<T, SeqStmt>) {
          WpResult second = wpc_rec(ctx, n.second, post);
          vc_rec(ctx, n.first, second.wp, avoid, out);
          vc_rec(ctx, n.second, post, avoid, out);
        } else if constexpr (std::is_same_v<T, IfStmt>) {
          vc_rec(ctx, n.then_branch, post, avoid, out);
          vc_rec(ctx, n.else_branch, post, avoid, out);
        } else if constexpr (std::is_same_v<T, WhileStmt>) {
          const OracleInfo& info = require_oracle(ctx, n.loop_id);
          if (!info.invariant) missing_field(n.loop_id, "invariant");
          if (!info.variant) missing_field(n.loop_id, "variant");
          if (!info.iter_bound) missing_field(n.loop_id, "bound");
          if (ctx.mode == VerifMode::Classic && !info.cost_fn)
            missing_field(n.loop_id, "cost");
          if (ctx.mode == VerifMode::Amortized && !info.amortized_cost)
            missing_field(n.loop_id, "amortized");
          if (ctx.mode == VerifMode::Amortized && !info.potential)
            missing_field(n.loop_id, "potential");
          const std::string prefix = "while" + std::to_string(n.loop_id) + ".";
          auto push = [&](Provenance prov, AssertPtr formula) {
            out.push_back({prefix + to_string(prov), prov, n.loop_id, std::move(formula)});
          };
          AssertPtr cond = to_assertion(n.cond);
          const std::string k = fresh_name("k", avoid);
          avoid.insert(k);
          AssertPtr entry = mk_and(mk_and(info.invariant, cond),
                                   mk_acmp(CmpOp::Eq, info.variant, mk_var(k)));
          AssertPtr progress = mk_acmp(CmpOp::Gt, info.variant, mk_var(k));
          if (ctx.mode == VerifMode::Classic) {
            AssertPtr body_post = mk_and(info.invariant, progress);
            WpResult body = wpc_rec(ctx, n.body, body_post);
            push(Provenance::InvariantPreservation,
                 mk_quant(Quant::Forall, k, mk_implies(entry, body.wp)));
            ArithPtr cost_at_k =
                subst_aexp(info.cost_fn->body, info.cost_fn->binder, mk_var(k));
            push(Provenance::CostBound,
                 mk_implies(entry, mk_acmp(CmpOp::Ge, cost_at_k, body.cost)));
            push(Provenance::LoopExit, mk_implies(mk_and(info.invariant, mk_anot(cond)), post));
            push(Provenance::TerminationBound,
                 mk_implies(mk_and(info.invariant, cond),
                            mk_acmp(CmpOp::Le, info.variant, info.iter_bound)));
            vc_rec(ctx, n.body, body_post, avoid, out);
          } else {
            const std::string pk = fresh_name("pk", avoid);
            avoid.insert(pk);
            AssertPtr body_post = mk_and(mk_and(info.invariant, progress),
                                         mk_acmp(CmpOp::Eq, info.potential, mk_var(pk)));
            WpResult body = wpc_rec(ctx, n.body, body_post);
            push(Provenance::InvariantPreservation,
                 mk_quant(Quant::Forall, k, mk_implies(entry, body.wp)));
            ArithPtr budget =
                mk_sub(mk_add(info.amortized_cost, info.potential), mk_var(pk));
            push(Provenance::AmortizedCost,
                 mk_implies(entry, mk_acmp(CmpOp::Ge, budget, body.cost)));
            push(Provenance::LoopExit, mk_implies(mk_and(info.invariant, mk_anot(cond)), post));
            push(Provenance::TerminationBound,
                 mk_implies(mk_and(info.invariant, cond),
                            mk_acmp(CmpOp::Le, info.variant, info.iter_bound)));
            push(Provenance::PotentialNonneg,
                 mk_implies(info.invariant, mk_acmp(CmpOp::Ge, info.potential, mk_int(0))));
            vc_rec(ctx, n.body, body_post, avoid, out);
          }
        } else {
          static_assert(std::is_same_v<T, ForStmt>);
          const OracleInfo& info = require_oracle(ctx, n.loop_id);
          if (!info.invariant) missing_field(n.loop_id, "invariant");
          const std::string prefix = "for" + std::to_string(n.loop_id) + ".";
          auto push = [&](Provenance prov, AssertPtr formula) {
            out.push_back({prefix + to_string(prov), prov, n.loop_id, std::move(formula)});
          };
          AssertPtr body_post =
              subst_assertion(info.invariant, n.binder, mk_add(mk_var(n.binder), mk_int(1)));
          WpResult body = wpc_rec(ctx, n.body, body_post);
          push(Provenance::ExitImpliesPost,
               mk_implies(subst_assertion(info.invariant, n.binder, n.upper), post));
          AssertPtr in_range =
              mk_and(mk_and(info.invariant,
                            mk_acmp(CmpOp::Le, mk_int(n.lower), mk_var(n.binder))),
                     mk_acmp(CmpOp::Lt, mk_var(n.binder), n.upper));
          push(Provenance::InvariantPreservation, mk_implies(in_range, body.wp));
          push(Provenance::LoopExit,
               mk_implies(mk_and(info.invariant,
                                 mk_anot(mk_acmp(CmpOp::Lt, mk_int(n.lower), n.upper))),
                          post));
          vc_rec(ctx, n.body, body_post, avoid, out);
        }
      },
      s->node);
}

std::set<std::string> seed_avoid(const StmtPtr& s, const AssertPtr& post,
                                 const std::map<int, OracleInfo>& oracle) {
  std::set<std::string> avoid;
  collect_identifiers(s, avoid);
  collect_identifiers(post, avoid);
  for (const auto& [id, info] : oracle) {
    (void)id;
    if (info.invariant) collect_identifiers(info.invariant, avoid);
    if (info.variant) collect_identifiers(info.variant, avoid);
    if (info.iter_bound) collect_identifiers(info.iter_bound, avoid);
    if (info.cost_fn) {
      avoid.insert(info.cost_fn->binder);
      collect_identifiers(info.cost_fn->body, avoid);
    }
    if (info.amortized_cost) collect_identifiers(info.amortized_cost, avoid);
    if (info.potential) collect_identifiers(info.potential, avoid);
  }
  return avoid;
}

}  // namespace

WpResult wpc(const StmtPtr& s, const AssertPtr& post, VerifMode mode, const CostModel& m,
             const std::map<int, OracleInfo>& oracle, const VcgOptions& opts) {
  VcgContext ctx{mode, m, oracle, opts};
  return wpc_rec(ctx, s, post);
}

std::vector<VerificationCondition> vc(const StmtPtr& s, const AssertPtr& post, VerifMode mode,
                                      const CostModel& m,
                                      const std::map<int, OracleInfo>& oracle,
                                      const VcgOptions& opts) {
  VcgContext ctx{mode, m, oracle, opts};
  std::set<std::string> avoid = seed_avoid(s, post, oracle);
  std::vector<VerificationCondition> out;
  vc_rec(ctx, s, post, avoid, out);
  return out;
}

std::vector<VerificationCondition> vcg(const AnnotatedProgram& p, const CostModel& m,
                                       const VcgOptions& opts) {
  VcgContext ctx{p.mode, m, p.oracle, opts};
  WpResult whole = wpc_rec(ctx, p.body, p.postcondition);
  std::vector<VerificationCondition> out;
  out.push_back({"main.correctness", Provenance::Correctness, std::nullopt,
                 mk_implies(p.precondition, whole.wp)});
  CmpOp cmp = p.mode == VerifMode::Exact ? CmpOp::Eq : CmpOp::Ge;
  out.push_back({"main.cost-bound", Provenance::CostBound, std::nullopt,
                 mk_implies(p.precondition, mk_acmp(cmp, p.cost_bound, whole.cost))});
  std::set<std::string> avoid = collect_identifiers(p);
  vc_rec(ctx, p.body, p.postcondition, avoid, out);
  return out;
}

}  // namespace timebound
