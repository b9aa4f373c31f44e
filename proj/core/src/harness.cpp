#include "timebound/harness.hpp"

#include <algorithm>
#include <random>
#include <sstream>

#include "timebound/parser.hpp"
#include "timebound/subst.hpp"

namespace timebound {

std::string describe(const ProgramState& state) {
  std::ostringstream os;
  bool first = true;
  auto sep = [&] {
    if (!first) os << ' ';
    first = false;
  };
  for (const auto& [name, value] : state.scalars) {
    sep();
    os << name << '=' << value;
  }
  for (const auto& [array, cells] : state.arrays) {
    for (const auto& [index, value] : cells) {
      sep();
      os << array << '[' << index << "]=" << value;
    }
  }
  if (first) os << "(empty)";
  return os.str();
}

std::string HarnessReport::to_text() const {
  std::ostringstream os;
  os << name << ": trials=" << trials << " sampled=" << sampled << " skipped=" << skipped
     << " violations=" << violations.size() << " seed=" << seed << '\n';
  std::set<std::string> seen;
  for (const Violation& v : violations) {
    if (!seen.insert(v.category).second) continue;  // first witness per category
    os << "  [" << v.category << "] trial " << v.trial << ": " << v.detail
       << " | state: " << describe(v.state);
    if (v.measured) os << " | measured=" << *v.measured;
    if (v.bound) os << " | bound=" << *v.bound;
    os << '\n';
  }
  return os.str();
}

namespace {

Int draw(std::mt19937_64& rng, const Int& lo, const Int& hi) {
  if (hi <= lo) return lo;
  Int span = hi - lo + 1;
  auto width = span.convert_to<unsigned long long>();
  return lo + Int(rng() % width);
}

void flatten_and(const AssertPtr& a, std::vector<AssertPtr>& out) {
  if (const auto* bin = std::get_if<ABin>(&a->node); bin && bin->op == AConn::And) {
    flatten_and(bin->lhs, out);
    flatten_and(bin->rhs, out);
    return;
  }
  out.push_back(a);
}

bool quietly_satisfies(const AssertPtr& a, const ProgramState& state, const QuantBounds& qb) {
  try {
    return satisfies(a, state, qb);
  } catch (const EvalError&) {
    return false;
  }
}

/// Splits an implication into (guard, conclusion); plain formulas have no guard.
std::pair<AssertPtr, AssertPtr> split_guard(const AssertPtr& a) {
  if (const auto* bin = std::get_if<ABin>(&a->node); bin && bin->op == AConn::Implies)
    return {bin->lhs, bin->rhs};
  return {nullptr, a};
}

/// Pins scalars mentioned in top-level equalities: x = e sets x to the value
/// of e (and symmetrically e = x). Two passes settle short chains like
/// q = 0, r = x.
void repair_equalities(const std::vector<AssertPtr>& conjuncts, ProgramState& state) {
  for (int pass = 0; pass < 2; ++pass) {
    for (const AssertPtr& c : conjuncts) {
      const auto* cmp = std::get_if<ACmp>(&c->node);
      if (!cmp || cmp->op != CmpOp::Eq) continue;
      const auto* lvar = std::get_if<Var>(&cmp->lhs->node);
      const auto* rvar = std::get_if<Var>(&cmp->rhs->node);
      try {
        if (lvar)
          state.set_scalar(lvar->name, eval_annot(cmp->rhs, state));
        else if (rvar)
          state.set_scalar(rvar->name, eval_annot(cmp->lhs, state));
      } catch (const EvalError&) {
        // Right-hand side not evaluable yet; rejection will decide.
      }
    }
  }
}

/// Fills array cells forced by forall conjuncts: for every binder value in
/// the quantifier domain whose guard holds, an equality atom with an array
/// read on one side writes that cell.
void repair_forall_fill(const std::vector<AssertPtr>& conjuncts, ProgramState& state,
                        const QuantBounds& qb) {
  for (const AssertPtr& c : conjuncts) {
    const auto* quant = std::get_if<AQuant>(&c->node);
    if (!quant || quant->quant != Quant::Forall) continue;
    auto [guard, concl] = split_guard(quant->body);
    std::vector<AssertPtr> atoms;
    flatten_and(concl, atoms);
    Int hi = qb.resolve_hi(state);
    for (Int k = qb.lo; k <= hi; ++k) {
      ProgramState local = state;
      local.set_scalar(quant->binder, k);
      if (guard && !quietly_satisfies(guard, local, qb)) continue;
      for (const AssertPtr& atom : atoms) {
        const auto* cmp = std::get_if<ACmp>(&atom->node);
        if (!cmp || cmp->op != CmpOp::Eq) continue;
        const ArrRead* read = std::get_if<ArrRead>(&cmp->lhs->node);
        ArithPtr other = cmp->rhs;
        if (!read) {
          read = std::get_if<ArrRead>(&cmp->rhs->node);
          other = cmp->lhs;
        }
        if (!read) continue;
        try {
          state.set_cell(read->array, eval_annot(read->index, local), eval_annot(other, local));
        } catch (const EvalError&) {
        }
      }
    }
  }
}

/// True when `e` is the variable `binder` plus the literal 1.
bool is_binder_plus_one(const ArithPtr& e, const std::string& binder) {
  const auto* bin = std::get_if<ArithBin>(&e->node);
  if (!bin || bin->op != ArithOp::Add) return false;
  const auto* var = std::get_if<Var>(&bin->lhs->node);
  const auto* one = std::get_if<IntConst>(&bin->rhs->node);
  return var && one && var->name == binder && one->value == 1;
}

/// Sorts drawn cells when the precondition demands order between array
/// reads: either adjacent (forall i. ... a[i] < a[i+1]) or pairwise under
/// nested foralls (a[i] <= a[j]). Strict order additionally spreads the
/// values out, staying inside the configured cell box.
void repair_sortedness(const std::vector<AssertPtr>& conjuncts, ProgramState& state,
                       const QuantBounds& qb, const SamplerConfig& config) {
  for (const AssertPtr& c : conjuncts) {
    const auto* outer = std::get_if<AQuant>(&c->node);
    if (!outer || outer->quant != Quant::Forall) continue;
    const ACmp* cmp = nullptr;
    bool adjacent = false;
    if (const auto* inner = std::get_if<AQuant>(&outer->body->node);
        inner && inner->quant == Quant::Forall) {
      auto [guard, concl] = split_guard(inner->body);
      (void)guard;
      cmp = std::get_if<ACmp>(&concl->node);
    } else {
      auto [guard, concl] = split_guard(outer->body);
      (void)guard;
      cmp = std::get_if<ACmp>(&concl->node);
      adjacent = true;
    }
    if (!cmp || (cmp->op != CmpOp::Lt && cmp->op != CmpOp::Le)) continue;
    const auto* lread = std::get_if<ArrRead>(&cmp->lhs->node);
    const auto* rread = std::get_if<ArrRead>(&cmp->rhs->node);
    if (!lread || !rread || lread->array != rread->array) continue;
    const auto* lidx = std::get_if<Var>(&lread->index->node);
    if (!lidx) continue;
    if (adjacent) {
      if (lidx->name != outer->binder || !is_binder_plus_one(rread->index, outer->binder))
        continue;
    } else {
      const auto* ridx = std::get_if<Var>(&rread->index->node);
      if (!ridx || lidx->name == ridx->name) continue;
      const auto* inner = std::get_if<AQuant>(&outer->body->node);
      std::set<std::string> binders = {outer->binder, inner->binder};
      if (!binders.count(lidx->name) || !binders.count(ridx->name)) continue;
    }

    Int hi = qb.resolve_hi(state);
    if (adjacent) hi += 1;  // a[i] < a[i+1] at the top of the domain reads one past it
    if (hi < qb.lo) continue;
    std::vector<Int> values;
    for (Int k = qb.lo; k <= hi; ++k) values.push_back(state.cell(lread->array, k));
    std::sort(values.begin(), values.end());
    if (cmp->op == CmpOp::Lt) {
      for (std::size_t t = 1; t < values.size(); ++t)
        values[t] = std::max(values[t], Int(values[t - 1] + 1));
      if (!values.empty() && values.back() > config.cell_hi) {
        values.back() = config.cell_hi;
        for (std::size_t t = values.size() - 1; t-- > 0;)
          values[t] = std::min(values[t], Int(values[t + 1] - 1));
      }
    }
    Int k = qb.lo;
    for (const Int& v : values) state.set_cell(lread->array, k++, v);
  }
}

/// Pins existential witnesses of the form  exists w. ... and a[w] = e ...:
/// picks a random domain index where the other atoms hold and either copies
/// the cell into e (when e is a variable) or writes e's value into the cell.
void repair_exists_witness(const std::vector<AssertPtr>& conjuncts, ProgramState& state,
                           const QuantBounds& qb, std::mt19937_64& rng) {
  for (const AssertPtr& c : conjuncts) {
    const auto* quant = std::get_if<AQuant>(&c->node);
    if (!quant || quant->quant != Quant::Exists) continue;
    std::vector<AssertPtr> atoms;
    auto [guard, concl] = split_guard(quant->body);
    if (guard) flatten_and(guard, atoms);
    flatten_and(concl, atoms);

    const ArrRead* read = nullptr;
    ArithPtr other;
    std::size_t eq_at = atoms.size();
    for (std::size_t i = 0; i < atoms.size() && !read; ++i) {
      const auto* cmp = std::get_if<ACmp>(&atoms[i]->node);
      if (!cmp || cmp->op != CmpOp::Eq) continue;
      for (bool flip : {false, true}) {
        const ArithPtr& lhs = flip ? cmp->rhs : cmp->lhs;
        const ArithPtr& rhs = flip ? cmp->lhs : cmp->rhs;
        const auto* r = std::get_if<ArrRead>(&lhs->node);
        const auto* idx = r ? std::get_if<Var>(&r->index->node) : nullptr;
        if (r && idx && idx->name == quant->binder && !free_vars(rhs).count(quant->binder)) {
          read = r;
          other = rhs;
          eq_at = i;
          break;
        }
      }
    }
    if (!read) continue;

    Int hi = qb.resolve_hi(state);
    std::vector<Int> candidates;
    for (Int w = qb.lo; w <= hi; ++w) {
      ProgramState local = state;
      local.set_scalar(quant->binder, w);
      bool ok = true;
      for (std::size_t i = 0; i < atoms.size() && ok; ++i)
        if (i != eq_at) ok = quietly_satisfies(atoms[i], local, qb);
      if (ok) candidates.push_back(w);
    }
    if (candidates.empty()) continue;
    Int w = candidates[(rng() % candidates.size())];
    if (const auto* var = std::get_if<Var>(&other->node)) {
      state.set_scalar(var->name, state.cell(read->array, w));
    } else {
      ProgramState local = state;
      local.set_scalar(quant->binder, w);
      try {
        state.set_cell(read->array, w, eval_annot(other, local));
      } catch (const EvalError&) {
      }
    }
  }
}

}  // namespace

std::vector<ProgramState> sample_state(const AssertPtr& pre, const std::set<std::string>& scalars,
                                       const std::set<std::string>& arrays, long long trials,
                                       std::uint64_t seed, const SamplerConfig& config,
                                       SampleStats* stats) {
  if (trials < 1) throw std::invalid_argument("sample_state requires trials >= 1");
  std::mt19937_64 rng(seed);
  std::vector<AssertPtr> conjuncts;
  flatten_and(pre, conjuncts);

  std::vector<ProgramState> accepted;
  long long attempts = 0;
  const long long max_attempts = 10000 * trials;
  while (static_cast<long long>(accepted.size()) < trials && attempts < max_attempts) {
    ++attempts;
    ProgramState state;
    for (const std::string& name : scalars) {
      auto it = config.overrides.find(name);
      const Int& lo = it != config.overrides.end() ? it->second.first : config.scalar_lo;
      const Int& hi = it != config.overrides.end() ? it->second.second : config.scalar_hi;
      state.set_scalar(name, draw(rng, lo, hi));
    }
    for (const std::string& array : arrays) {
      Int extent = draw(rng, config.extent_lo, config.extent_hi);
      for (Int idx = 0; idx < extent; ++idx)
        state.set_cell(array, idx, draw(rng, config.cell_lo, config.cell_hi));
    }

    repair_equalities(conjuncts, state);
    repair_forall_fill(conjuncts, state, config.quant);
    repair_sortedness(conjuncts, state, config.quant, config);
    repair_exists_witness(conjuncts, state, config.quant, rng);

    if (quietly_satisfies(pre, state, config.quant)) accepted.push_back(std::move(state));
  }
  if (stats) {
    stats->attempts = attempts;
    stats->accepted = static_cast<long long>(accepted.size());
  }
  if (accepted.empty())
    throw SamplingExhausted("no state satisfying the precondition after " +
                            std::to_string(attempts) + " attempts");
  return accepted;
}

namespace {

void collect_program_symbols(const AnnotatedProgram& p, std::set<std::string>& scalars,
                             std::set<std::string>& arrays) {
  for (const std::set<std::string>& s :
       {array_names(p.precondition), array_names(p.body), array_names(p.postcondition),
        array_names(p.cost_bound)})
    arrays.insert(s.begin(), s.end());
  for (const std::set<std::string>& s :
       {free_vars(p.precondition), program_variables(p.body), free_vars(p.postcondition),
        free_vars(p.cost_bound)})
    scalars.insert(s.begin(), s.end());
  for (const std::string& a : arrays) scalars.erase(a);
}

}  // namespace

HarnessReport check_bound(const AnnotatedProgram& p, const CostModel& m, long long trials,
                          std::uint64_t seed, const HarnessOptions& opts) {
  HarnessReport report;
  report.name = "check-bound";
  report.trials = trials;
  report.seed = seed;

  std::set<std::string> scalars, arrays;
  collect_program_symbols(p, scalars, arrays);
  std::vector<ProgramState> states =
      sample_state(p.precondition, scalars, arrays, trials, seed, opts.sampler);
  report.sampled = static_cast<long long>(states.size());

  const bool exact = p.mode == VerifMode::Exact;
  for (long long t = 0; t < report.sampled; ++t) {
    const ProgramState& initial = states[static_cast<std::size_t>(t)];
    ExecOutcome outcome;
    try {
      outcome = exec(p.body, initial, m, opts.exec);
    } catch (const EvalError& e) {
      report.violations.push_back({t, "interpreter-error", e.what(), initial, {}, {}});
      continue;
    }

    bool post_ok;
    std::string post_note;
    try {
      post_ok = satisfies(p.postcondition, outcome.state, opts.sampler.quant);
    } catch (const EvalError& e) {
      post_ok = false;
      post_note = std::string(" (") + e.what() + ")";
    }
    if (!post_ok)
      report.violations.push_back({t, "postcondition",
                                   "final state " + describe(outcome.state) + post_note, initial,
                                   outcome.cost, {}});

    Int bound;
    try {
      bound = eval_annot(p.cost_bound, initial);
    } catch (const EvalError& e) {
      report.violations.push_back({t, "bound-evaluation", e.what(), initial, outcome.cost, {}});
      continue;
    }
    const bool cost_ok = exact ? bound == outcome.cost : bound >= outcome.cost;
    if (!cost_ok)
      report.violations.push_back(
          {t, "cost-bound",
           std::string(exact ? "exact bound missed" : "bound exceeded") + ": measured " +
               outcome.cost.str() + " vs bound " + bound.str(),
           initial, outcome.cost, bound});
  }
  return report;
}

HarnessReport check_amortized_telescoping(const AnnotatedProgram& p, const CostModel& m,
                                          long long trials, std::uint64_t seed,
                                          const HarnessOptions& opts) {
  if (p.mode != VerifMode::Amortized)
    throw std::invalid_argument("check_amortized_telescoping requires an amortized program");

  HarnessReport report;
  report.name = "check-amortized-telescoping";
  report.trials = trials;
  report.seed = seed;

  std::set<std::string> scalars, arrays;
  collect_program_symbols(p, scalars, arrays);
  std::vector<ProgramState> states =
      sample_state(p.precondition, scalars, arrays, trials, seed, opts.sampler);
  report.sampled = static_cast<long long>(states.size());

  for (long long t = 0; t < report.sampled; ++t) {
    const ProgramState& initial = states[static_cast<std::size_t>(t)];

    ExecHooks hooks;
    hooks.on_loop_enter = [&](int loop_id, const ProgramState& entry) {
      auto it = p.oracle.find(loop_id);
      if (it == p.oracle.end() || !it->second.potential) return;
      try {
        Int phi = eval_annot(it->second.potential, entry);
        if (phi != 0)
          report.violations.push_back({t, "potential-entry",
                                       "loop " + std::to_string(loop_id) + " potential is " +
                                           phi.str() + " on entry",
                                       initial, {}, phi});
      } catch (const EvalError& e) {
        report.violations.push_back(
            {t, "potential-evaluation", e.what(), initial, {}, {}});
      }
    };
    hooks.on_loop_iter = [&](int loop_id, long long iteration, const ProgramState& before,
                             const ProgramState& after, const Int& body_cost) {
      auto it = p.oracle.find(loop_id);
      if (it == p.oracle.end() || !it->second.potential || !it->second.amortized_cost) return;
      try {
        Int phi_pre = eval_annot(it->second.potential, before);
        Int phi_post = eval_annot(it->second.potential, after);
        Int a = eval_annot(it->second.amortized_cost, before);
        Int budget = a + phi_pre - phi_post;
        if (budget < body_cost)
          report.violations.push_back({t, "amortized-budget",
                                       "loop " + std::to_string(loop_id) + " iteration " +
                                           std::to_string(iteration) + ": budget " + budget.str() +
                                           " < body cost " + body_cost.str(),
                                       initial, body_cost, budget});
        if (phi_post < 0)
          report.violations.push_back({t, "potential-negative",
                                       "loop " + std::to_string(loop_id) + " iteration " +
                                           std::to_string(iteration) + ": potential " +
                                           phi_post.str(),
                                       initial, {}, phi_post});
      } catch (const EvalError& e) {
        report.violations.push_back(
            {t, "potential-evaluation", e.what(), initial, {}, {}});
      }
    };

    ExecOptions exec_opts = opts.exec;
    exec_opts.hooks = &hooks;
    try {
      exec(p.body, initial, m, exec_opts);
    } catch (const EvalError& e) {
      report.violations.push_back({t, "interpreter-error", e.what(), initial, {}, {}});
    }
  }
  return report;
}

namespace {

/// Bounded random generators for the substitution-lemma property test.
class LemmaGen {
 public:
  explicit LemmaGen(std::mt19937_64& rng) : rng_(rng) {}

  static constexpr const char* kVars[4] = {"x", "y", "z", "w"};

  std::string var() { return kVars[rng_() % 4]; }

  ArithPtr arith(int depth) {
    if (depth <= 0) return rng_() % 2 ? mk_int(small()) : mk_var(var());
    switch (rng_() % 8) {
      case 0: return mk_int(small());
      case 1: return mk_var(var());
      case 2: return mk_arr_read("arr", arith(depth - 1));
      case 3:
      case 4: {
        auto op = static_cast<ArithOp>(rng_() % 5);
        // Towers of powers evaluate to astronomically large integers once a
        // substituted expression lands in an exponent, so exponents stay
        // literal and small; negative ones still probe the error path.
        if (op == ArithOp::Pow) return mk_pow(arith(depth - 1), mk_int(small() % 4));
        return mk_bin(op, arith(depth - 1), arith(depth - 1));
      }
      case 5: return mk_max(arith(depth - 1), arith(depth - 1));
      case 6: return mk_log2(arith(depth - 1));
      default: {
        std::string binder = var();
        return mk_sum(binder, mk_int(small() % 3), mk_int(small() % 3), arith(depth - 1));
      }
    }
  }

  AssertPtr assertion(int depth) {
    if (depth <= 0) return mk_abool(rng_() % 2 == 0);
    switch (rng_() % 8) {
      case 0: return mk_abool(rng_() % 2 == 0);
      case 1:
      case 2:
      case 3: {
        auto op = static_cast<CmpOp>(rng_() % 6);
        return mk_acmp(op, arith(depth - 1), arith(depth - 1));
      }
      case 4: return mk_anot(assertion(depth - 1));
      case 5: {
        auto op = static_cast<AConn>(rng_() % 3);
        return mk_abin(op, assertion(depth - 1), assertion(depth - 1));
      }
      default: {
        Quant q = rng_() % 2 ? Quant::Forall : Quant::Exists;
        return mk_quant(q, var(), assertion(depth - 1));
      }
    }
  }

  ProgramState state() {
    ProgramState s;
    for (const char* name : kVars) s.set_scalar(name, small());
    for (Int i = -4; i <= 8; ++i) s.set_cell("arr", i, small());
    return s;
  }

 private:
  Int small() { return Int(rng_() % 17) - 8; }
  std::mt19937_64& rng_;
};

}  // namespace

HarnessReport check_substitution_lemma(long long trials, std::uint64_t seed) {
  HarnessReport report;
  report.name = "check-substitution-lemma";
  report.trials = trials;
  report.seed = seed;

  std::mt19937_64 rng(seed);
  LemmaGen gen(rng);
  QuantBounds qb;
  qb.lo = 0;
  qb.hi = 3;

  for (long long t = 0; t < trials; ++t) {
    AssertPtr formula = gen.assertion(4);
    std::string x = gen.var();
    ArithPtr a = gen.arith(3);
    ProgramState state = gen.state();

    bool lhs, rhs;
    try {
      lhs = satisfies(subst_assertion(formula, x, a), state, qb);
      ProgramState updated = state;
      updated.set_scalar(x, eval_annot(a, state));
      rhs = satisfies(formula, updated, qb);
    } catch (const EvalError&) {
      ++report.skipped;
      continue;
    }
    ++report.sampled;
    if (lhs != rhs)
      report.violations.push_back({t, "biconditional",
                                   pretty(formula) + " with " + x + " := " + pretty(a), state,
                                   {}, {}});
  }
  return report;
}

}  // namespace timebound
