#include "timebound/ast.hpp"

#include <algorithm>
#include <stdexcept>

namespace timebound {

// ---------------------------------------------------------------------------
// Constructors
// ---------------------------------------------------------------------------

ArithPtr mk_int(Int value) { return std::make_shared<ArithExpr>(ArithExpr{IntConst{std::move(value)}}); }
ArithPtr mk_int(long long value) { return mk_int(Int(value)); }
ArithPtr mk_var(std::string name) { return std::make_shared<ArithExpr>(ArithExpr{Var{std::move(name)}}); }
ArithPtr mk_arr_read(std::string array, ArithPtr index) {
  return std::make_shared<ArithExpr>(ArithExpr{ArrRead{std::move(array), std::move(index)}});
}
ArithPtr mk_bin(ArithOp op, ArithPtr lhs, ArithPtr rhs) {
  return std::make_shared<ArithExpr>(ArithExpr{ArithBin{op, std::move(lhs), std::move(rhs)}});
}
ArithPtr mk_add(ArithPtr lhs, ArithPtr rhs) { return mk_bin(ArithOp::Add, std::move(lhs), std::move(rhs)); }
ArithPtr mk_sub(ArithPtr lhs, ArithPtr rhs) { return mk_bin(ArithOp::Sub, std::move(lhs), std::move(rhs)); }
ArithPtr mk_mul(ArithPtr lhs, ArithPtr rhs) { return mk_bin(ArithOp::Mul, std::move(lhs), std::move(rhs)); }
ArithPtr mk_div(ArithPtr lhs, ArithPtr rhs) { return mk_bin(ArithOp::Div, std::move(lhs), std::move(rhs)); }
ArithPtr mk_pow(ArithPtr lhs, ArithPtr rhs) { return mk_bin(ArithOp::Pow, std::move(lhs), std::move(rhs)); }
ArithPtr mk_max(ArithPtr lhs, ArithPtr rhs) {
  return std::make_shared<ArithExpr>(ArithExpr{MaxExpr{std::move(lhs), std::move(rhs)}});
}
ArithPtr mk_log2(ArithPtr arg) { return std::make_shared<ArithExpr>(ArithExpr{LogTwo{std::move(arg)}}); }
ArithPtr mk_sum(std::string binder, ArithPtr lower, ArithPtr upper, ArithPtr body) {
  return std::make_shared<ArithExpr>(
      ArithExpr{SumExpr{std::move(binder), std::move(lower), std::move(upper), std::move(body)}});
}

BoolPtr mk_bool(bool value) { return std::make_shared<BoolExpr>(BoolExpr{BoolConst{value}}); }
BoolPtr mk_cmp(CmpOp op, ArithPtr lhs, ArithPtr rhs) {
  return std::make_shared<BoolExpr>(BoolExpr{Cmp{op, std::move(lhs), std::move(rhs)}});
}
BoolPtr mk_not(BoolPtr arg) { return std::make_shared<BoolExpr>(BoolExpr{NotExpr{std::move(arg)}}); }
BoolPtr mk_bbin(BoolOp op, BoolPtr lhs, BoolPtr rhs) {
  return std::make_shared<BoolExpr>(BoolExpr{BoolBin{op, std::move(lhs), std::move(rhs)}});
}

AssertPtr mk_abool(bool value) { return std::make_shared<Assertion>(Assertion{ABool{value}}); }
AssertPtr mk_acmp(CmpOp op, ArithPtr lhs, ArithPtr rhs) {
  return std::make_shared<Assertion>(Assertion{ACmp{op, std::move(lhs), std::move(rhs)}});
}
AssertPtr mk_anot(AssertPtr arg) { return std::make_shared<Assertion>(Assertion{ANot{std::move(arg)}}); }
AssertPtr mk_abin(AConn op, AssertPtr lhs, AssertPtr rhs) {
  return std::make_shared<Assertion>(Assertion{ABin{op, std::move(lhs), std::move(rhs)}});
}
AssertPtr mk_and(AssertPtr lhs, AssertPtr rhs) { return mk_abin(AConn::And, std::move(lhs), std::move(rhs)); }
AssertPtr mk_or(AssertPtr lhs, AssertPtr rhs) { return mk_abin(AConn::Or, std::move(lhs), std::move(rhs)); }
AssertPtr mk_implies(AssertPtr lhs, AssertPtr rhs) {
  return mk_abin(AConn::Implies, std::move(lhs), std::move(rhs));
}
AssertPtr mk_quant(Quant quant, std::string binder, AssertPtr body) {
  return std::make_shared<Assertion>(Assertion{AQuant{quant, std::move(binder), std::move(body)}});
}

AssertPtr to_assertion(const BoolPtr& b) {
  struct Visitor {
    AssertPtr operator()(const BoolConst& n) const { return mk_abool(n.value); }
    AssertPtr operator()(const Cmp& n) const { return mk_acmp(n.op, n.lhs, n.rhs); }
    AssertPtr operator()(const NotExpr& n) const { return mk_anot(to_assertion(n.arg)); }
    AssertPtr operator()(const BoolBin& n) const {
      return mk_abin(n.op == BoolOp::And ? AConn::And : AConn::Or, to_assertion(n.lhs),
                     to_assertion(n.rhs));
    }
  };
  return std::visit(Visitor{}, b->node);
}

StmtPtr mk_skip(SourceSpan span) { return std::make_shared<Stmt>(Stmt{Skip{}, span}); }
StmtPtr mk_assign(std::string var, ArithPtr value, SourceSpan span) {
  return std::make_shared<Stmt>(Stmt{Assign{std::move(var), std::move(value)}, span});
}
StmtPtr mk_arr_assign(std::string array, ArithPtr index, ArithPtr value, SourceSpan span) {
  return std::make_shared<Stmt>(Stmt{ArrAssign{std::move(array), std::move(index), std::move(value)}, span});
}
StmtPtr mk_seq(StmtPtr first, StmtPtr second, SourceSpan span) {
  return std::make_shared<Stmt>(Stmt{SeqStmt{std::move(first), std::move(second)}, span});
}
StmtPtr mk_if(BoolPtr cond, StmtPtr then_branch, StmtPtr else_branch, SourceSpan span) {
  return std::make_shared<Stmt>(
      Stmt{IfStmt{std::move(cond), std::move(then_branch), std::move(else_branch)}, span});
}
StmtPtr mk_while(int loop_id, BoolPtr cond, StmtPtr body, SourceSpan span) {
  return std::make_shared<Stmt>(Stmt{WhileStmt{loop_id, std::move(cond), std::move(body)}, span});
}
StmtPtr mk_for(int loop_id, std::string binder, Int lower, ArithPtr upper, StmtPtr body,
               SourceSpan span) {
  return std::make_shared<Stmt>(
      Stmt{ForStmt{loop_id, std::move(binder), std::move(lower), std::move(upper), std::move(body)}, span});
}

// ---------------------------------------------------------------------------
// Structural equality
// ---------------------------------------------------------------------------

bool equal(const ArithPtr& a, const ArithPtr& b) {
  if (a == b) return true;
  if (!a || !b) return false;
  return *a == *b;
}

bool operator==(const ArithExpr& a, const ArithExpr& b) {
  if (a.node.index() != b.node.index()) return false;
  struct Visitor {
    const ArithExpr& other;
    bool operator()(const IntConst& n) const { return n.value == std::get<IntConst>(other.node).value; }
    bool operator()(const Var& n) const { return n.name == std::get<Var>(other.node).name; }
    bool operator()(const ArrRead& n) const {
      const auto& o = std::get<ArrRead>(other.node);
      return n.array == o.array && equal(n.index, o.index);
    }
    bool operator()(const ArithBin& n) const {
      const auto& o = std::get<ArithBin>(other.node);
      return n.op == o.op && equal(n.lhs, o.lhs) && equal(n.rhs, o.rhs);
    }
    bool operator()(const MaxExpr& n) const {
      const auto& o = std::get<MaxExpr>(other.node);
      return equal(n.lhs, o.lhs) && equal(n.rhs, o.rhs);
    }
    bool operator()(const LogTwo& n) const { return equal(n.arg, std::get<LogTwo>(other.node).arg); }
    bool operator()(const SumExpr& n) const {
      const auto& o = std::get<SumExpr>(other.node);
      return n.binder == o.binder && equal(n.lower, o.lower) && equal(n.upper, o.upper) &&
             equal(n.body, o.body);
    }
  };
  return std::visit(Visitor{b}, a.node);
}

bool equal(const BoolPtr& a, const BoolPtr& b) {
  if (a == b) return true;
  if (!a || !b) return false;
  return *a == *b;
}

bool operator==(const BoolExpr& a, const BoolExpr& b) {
  if (a.node.index() != b.node.index()) return false;
  struct Visitor {
    const BoolExpr& other;
    bool operator()(const BoolConst& n) const { return n.value == std::get<BoolConst>(other.node).value; }
    bool operator()(const Cmp& n) const {
      const auto& o = std::get<Cmp>(other.node);
      return n.op == o.op && equal(n.lhs, o.lhs) && equal(n.rhs, o.rhs);
    }
    bool operator()(const NotExpr& n) const { return equal(n.arg, std::get<NotExpr>(other.node).arg); }
    bool operator()(const BoolBin& n) const {
      const auto& o = std::get<BoolBin>(other.node);
      return n.op == o.op && equal(n.lhs, o.lhs) && equal(n.rhs, o.rhs);
    }
  };
  return std::visit(Visitor{b}, a.node);
}

bool equal(const AssertPtr& a, const AssertPtr& b) {
  if (a == b) return true;
  if (!a || !b) return false;
  return *a == *b;
}

bool operator==(const Assertion& a, const Assertion& b) {
  if (a.node.index() != b.node.index()) return false;
  struct Visitor {
    const Assertion& other;
    bool operator()(const ABool& n) const { return n.value == std::get<ABool>(other.node).value; }
    bool operator()(const ACmp& n) const {
      const auto& o = std::get<ACmp>(other.node);
      return n.op == o.op && equal(n.lhs, o.lhs) && equal(n.rhs, o.rhs);
    }
    bool operator()(const ANot& n) const { return equal(n.arg, std::get<ANot>(other.node).arg); }
    bool operator()(const ABin& n) const {
      const auto& o = std::get<ABin>(other.node);
      return n.op == o.op && equal(n.lhs, o.lhs) && equal(n.rhs, o.rhs);
    }
    bool operator()(const AQuant& n) const {
      const auto& o = std::get<AQuant>(other.node);
      return n.quant == o.quant && n.binder == o.binder && equal(n.body, o.body);
    }
  };
  return std::visit(Visitor{b}, a.node);
}

bool equal(const StmtPtr& a, const StmtPtr& b) {
  if (a == b) return true;
  if (!a || !b) return false;
  return *a == *b;
}

bool operator==(const Stmt& a, const Stmt& b) {
  if (a.node.index() != b.node.index()) return false;
  struct Visitor {
    const Stmt& other;
    bool operator()(const Skip&) const { return true; }
    bool operator()(const Assign& n) const {
      const auto& o = std::get<Assign>(other.node);
      return n.var == o.var && equal(n.value, o.value);
    }
    bool operator()(const ArrAssign& n) const {
      const auto& o = std::get<ArrAssign>(other.node);
      return n.array == o.array && equal(n.index, o.index) && equal(n.value, o.value);
    }
    bool operator()(const SeqStmt& n) const {
      const auto& o = std::get<SeqStmt>(other.node);
      return equal(n.first, o.first) && equal(n.second, o.second);
    }
    bool operator()(const IfStmt& n) const {
      const auto& o = std::get<IfStmt>(other.node);
      return equal(n.cond, o.cond) && equal(n.then_branch, o.then_branch) &&
             equal(n.else_branch, o.else_branch);
    }
    bool operator()(const WhileStmt& n) const {
      const auto& o = std::get<WhileStmt>(other.node);
      return n.loop_id == o.loop_id && equal(n.cond, o.cond) && equal(n.body, o.body);
    }
    bool operator()(const ForStmt& n) const {
      const auto& o = std::get<ForStmt>(other.node);
      return n.loop_id == o.loop_id && n.binder == o.binder && n.lower == o.lower &&
             equal(n.upper, o.upper) && equal(n.body, o.body);
    }
  };
  return std::visit(Visitor{b}, a.node);
}

bool operator==(const OracleInfo& a, const OracleInfo& b) {
  auto fn_eq = [](const std::optional<CostFn>& x, const std::optional<CostFn>& y) {
    if (x.has_value() != y.has_value()) return false;
    if (!x) return true;
    return x->binder == y->binder && equal(x->body, y->body);
  };
  return equal(a.invariant, b.invariant) && equal(a.variant, b.variant) &&
         equal(a.iter_bound, b.iter_bound) && fn_eq(a.cost_fn, b.cost_fn) &&
         equal(a.amortized_cost, b.amortized_cost) && equal(a.potential, b.potential);
}

bool operator==(const AnnotatedProgram& a, const AnnotatedProgram& b) {
  return a.mode == b.mode && equal(a.precondition, b.precondition) && equal(a.body, b.body) &&
         equal(a.postcondition, b.postcondition) && equal(a.cost_bound, b.cost_bound) &&
         a.oracle == b.oracle;
}

// ---------------------------------------------------------------------------
// Modes and cost models
// ---------------------------------------------------------------------------

std::string to_string(VerifMode mode) {
  switch (mode) {
    case VerifMode::Classic: return "classic";
    case VerifMode::Amortized: return "amortized";
    case VerifMode::Exact: return "exact";
  }
  return "classic";
}

std::optional<VerifMode> mode_from_string(const std::string& text) {
  if (text == "classic") return VerifMode::Classic;
  if (text == "amortized") return VerifMode::Amortized;
  if (text == "exact") return VerifMode::Exact;
  return std::nullopt;
}

const std::vector<std::string>& CostModel::names() {
  static const std::vector<std::string> kNames = {
      "C_CST", "C_VAR", "C_ARR", "C_ADD", "C_SUB", "C_MUL", "C_DIV",
      "C_POW", "C_EQ",  "C_NEQ", "C_LT",  "C_GT",  "C_LE",  "C_GE",
      "C_NOT", "C_AND", "C_OR",  "C_SKIP", "C_ASSIGN_V", "C_ASSIGN_A"};
  return kNames;
}

bool CostModel::is_name(const std::string& name) {
  const auto& all = names();
  return std::find(all.begin(), all.end(), name) != all.end();
}

CostModel CostModel::unit() { return CostModel{}; }

Int CostModel::at(const std::string& name) const {
  if (!is_name(name)) throw std::invalid_argument("unknown cost name: " + name);
  auto it = costs_.find(name);
  return it == costs_.end() ? Int(1) : it->second;
}

void CostModel::set(const std::string& name, Int value) {
  if (!is_name(name)) throw std::invalid_argument("unknown cost name: " + name);
  if (value < 0) throw std::invalid_argument("negative cost for " + name);
  costs_[name] = std::move(value);
}

// ---------------------------------------------------------------------------
// Variable collection
// ---------------------------------------------------------------------------

namespace {

void free_vars_into(const ArithPtr& e, std::set<std::string>& bound, std::set<std::string>& out);

void free_vars_into(const ArithPtr& e, std::set<std::string>& bound, std::set<std::string>& out) {
  struct Visitor {
    std::set<std::string>& bound;
    std::set<std::string>& out;
    void operator()(const IntConst&) const {}
    void operator()(const Var& n) const {
      if (!bound.count(n.name)) out.insert(n.name);
    }
    void operator()(const ArrRead& n) const {
      out.insert(n.array);  // arrays are never bound by sum/quantifier binders
      free_vars_into(n.index, bound, out);
    }
    void operator()(const ArithBin& n) const {
      free_vars_into(n.lhs, bound, out);
      free_vars_into(n.rhs, bound, out);
    }
    void operator()(const MaxExpr& n) const {
      free_vars_into(n.lhs, bound, out);
      free_vars_into(n.rhs, bound, out);
    }
    void operator()(const LogTwo& n) const { free_vars_into(n.arg, bound, out); }
    void operator()(const SumExpr& n) const {
      free_vars_into(n.lower, bound, out);
      free_vars_into(n.upper, bound, out);
      const bool was_bound = bound.count(n.binder) > 0;
      bound.insert(n.binder);
      free_vars_into(n.body, bound, out);
      if (!was_bound) bound.erase(n.binder);
    }
  };
  std::visit(Visitor{bound, out}, e->node);
}

void free_vars_into(const BoolPtr& e, std::set<std::string>& bound, std::set<std::string>& out) {
  struct Visitor {
    std::set<std::string>& bound;
    std::set<std::string>& out;
    void operator()(const BoolConst&) const {}
    void operator()(const Cmp& n) const {
      free_vars_into(n.lhs, bound, out);
      free_vars_into(n.rhs, bound, out);
    }
    void operator()(const NotExpr& n) const { free_vars_into(n.arg, bound, out); }
    void operator()(const BoolBin& n) const {
      free_vars_into(n.lhs, bound, out);
      free_vars_into(n.rhs, bound, out);
    }
  };
  std::visit(Visitor{bound, out}, e->node);
}

void free_vars_into(const AssertPtr& a, std::set<std::string>& bound, std::set<std::string>& out) {
  struct Visitor {
    std::set<std::string>& bound;
    std::set<std::string>& out;
    void operator()(const ABool&) const {}
    void operator()(const ACmp& n) const {
      free_vars_into(n.lhs, bound, out);
      free_vars_into(n.rhs, bound, out);
    }
    void operator()(const ANot& n) const { free_vars_into(n.arg, bound, out); }
    void operator()(const ABin& n) const {
      free_vars_into(n.lhs, bound, out);
      free_vars_into(n.rhs, bound, out);
    }
    void operator()(const AQuant& n) const {
      const bool was_bound = bound.count(n.binder) > 0;
      bound.insert(n.binder);
      free_vars_into(n.body, bound, out);
      if (!was_bound) bound.erase(n.binder);
    }
  };
  std::visit(Visitor{bound, out}, a->node);
}

void array_names_into(const ArithPtr& e, std::set<std::string>& out) {
  struct Visitor {
    std::set<std::string>& out;
    void operator()(const IntConst&) const {}
    void operator()(const Var&) const {}
    void operator()(const ArrRead& n) const {
      out.insert(n.array);
      array_names_into(n.index, out);
    }
    void operator()(const ArithBin& n) const {
      array_names_into(n.lhs, out);
      array_names_into(n.rhs, out);
    }
    void operator()(const MaxExpr& n) const {
      array_names_into(n.lhs, out);
      array_names_into(n.rhs, out);
    }
    void operator()(const LogTwo& n) const { array_names_into(n.arg, out); }
    void operator()(const SumExpr& n) const {
      array_names_into(n.lower, out);
      array_names_into(n.upper, out);
      array_names_into(n.body, out);
    }
  };
  std::visit(Visitor{out}, e->node);
}

void array_names_into(const BoolPtr& e, std::set<std::string>& out) {
  struct Visitor {
    std::set<std::string>& out;
    void operator()(const BoolConst&) const {}
    void operator()(const Cmp& n) const {
      array_names_into(n.lhs, out);
      array_names_into(n.rhs, out);
    }
    void operator()(const NotExpr& n) const { array_names_into(n.arg, out); }
    void operator()(const BoolBin& n) const {
      array_names_into(n.lhs, out);
      array_names_into(n.rhs, out);
    }
  };
  std::visit(Visitor{out}, e->node);
}

void array_names_into(const AssertPtr& a, std::set<std::string>& out) {
  struct Visitor {
    std::set<std::string>& out;
    void operator()(const ABool&) const {}
    void operator()(const ACmp& n) const {
      array_names_into(n.lhs, out);
      array_names_into(n.rhs, out);
    }
    void operator()(const ANot& n) const { array_names_into(n.arg, out); }
    void operator()(const ABin& n) const {
      array_names_into(n.lhs, out);
      array_names_into(n.rhs, out);
    }
    void operator()(const AQuant& n) const { array_names_into(n.body, out); }
  };
  std::visit(Visitor{out}, a->node);
}

void array_names_into(const StmtPtr& s, std::set<std::string>& out) {
  struct Visitor {
    std::set<std::string>& out;
    void operator()(const Skip&) const {}
    void operator()(const Assign& n) const { array_names_into(n.value, out); }
    void operator()(const ArrAssign& n) const {
      out.insert(n.array);
      array_names_into(n.index, out);
      array_names_into(n.value, out);
    }
    void operator()(const SeqStmt& n) const {
      array_names_into(n.first, out);
      array_names_into(n.second, out);
    }
    void operator()(const IfStmt& n) const {
      array_names_into(n.cond, out);
      array_names_into(n.then_branch, out);
      array_names_into(n.else_branch, out);
    }
    void operator()(const WhileStmt& n) const {
      array_names_into(n.cond, out);
      array_names_into(n.body, out);
    }
    void operator()(const ForStmt& n) const {
      array_names_into(n.upper, out);
      array_names_into(n.body, out);
    }
  };
  std::visit(Visitor{out}, s->node);
}

}  // namespace

std::set<std::string> free_vars(const ArithPtr& e) {
  std::set<std::string> bound, out;
  free_vars_into(e, bound, out);
  return out;
}

std::set<std::string> free_vars(const BoolPtr& e) {
  std::set<std::string> bound, out;
  free_vars_into(e, bound, out);
  return out;
}

std::set<std::string> free_vars(const AssertPtr& a) {
  std::set<std::string> bound, out;
  free_vars_into(a, bound, out);
  return out;
}

std::set<std::string> array_names(const ArithPtr& e) {
  std::set<std::string> out;
  array_names_into(e, out);
  return out;
}
std::set<std::string> array_names(const BoolPtr& e) {
  std::set<std::string> out;
  array_names_into(e, out);
  return out;
}
std::set<std::string> array_names(const AssertPtr& a) {
  std::set<std::string> out;
  array_names_into(a, out);
  return out;
}
std::set<std::string> array_names(const StmtPtr& s) {
  std::set<std::string> out;
  array_names_into(s, out);
  return out;
}

void collect_identifiers(const ArithPtr& e, std::set<std::string>& out) {
  struct Visitor {
    std::set<std::string>& out;
    void operator()(const IntConst&) const {}
    void operator()(const Var& n) const { out.insert(n.name); }
    void operator()(const ArrRead& n) const {
      out.insert(n.array);
      collect_identifiers(n.index, out);
    }
    void operator()(const ArithBin& n) const {
      collect_identifiers(n.lhs, out);
      collect_identifiers(n.rhs, out);
    }
    void operator()(const MaxExpr& n) const {
      collect_identifiers(n.lhs, out);
      collect_identifiers(n.rhs, out);
    }
    void operator()(const LogTwo& n) const { collect_identifiers(n.arg, out); }
    void operator()(const SumExpr& n) const {
      out.insert(n.binder);
      collect_identifiers(n.lower, out);
      collect_identifiers(n.upper, out);
      collect_identifiers(n.body, out);
    }
  };
  std::visit(Visitor{out}, e->node);
}

void collect_identifiers(const BoolPtr& e, std::set<std::string>& out) {
  struct Visitor {
    std::set<std::string>& out;
    void operator()(const BoolConst&) const {}
    void operator()(const Cmp& n) const {
      collect_identifiers(n.lhs, out);
      collect_identifiers(n.rhs, out);
    }
    void operator()(const NotExpr& n) const { collect_identifiers(n.arg, out); }
    void operator()(const BoolBin& n) const {
      collect_identifiers(n.lhs, out);
      collect_identifiers(n.rhs, out);
    }
  };
  std::visit(Visitor{out}, e->node);
}

void collect_identifiers(const AssertPtr& a, std::set<std::string>& out) {
  struct Visitor {
    std::set<std::string>& out;
    void operator()(const ABool&) const {}
    void operator()(const ACmp& n) const {
      collect_identifiers(n.lhs, out);
      collect_identifiers(n.rhs, out);
    }
    void operator()(const ANot& n) const { collect_identifiers(n.arg, out); }
    void operator()(const ABin& n) const {
      collect_identifiers(n.lhs, out);
      collect_identifiers(n.rhs, out);
    }
    void operator()(const AQuant& n) const {
      out.insert(n.binder);
      collect_identifiers(n.body, out);
    }
  };
  std::visit(Visitor{out}, a->node);
}

void collect_identifiers(const StmtPtr& s, std::set<std::string>& out) {
  struct Visitor {
    std::set<std::string>& out;
    void operator()(const Skip&) const {}
    void operator()(const Assign& n) const {
      out.insert(n.var);
      collect_identifiers(n.value, out);
    }
    void operator()(const ArrAssign& n) const {
      out.insert(n.array);
      collect_identifiers(n.index, out);
      collect_identifiers(n.value, out);
    }
    void operator()(const SeqStmt& n) const {
      collect_identifiers(n.first, out);
      collect_identifiers(n.second, out);
    }
    void operator()(const IfStmt& n) const {
      collect_identifiers(n.cond, out);
      collect_identifiers(n.then_branch, out);
      collect_identifiers(n.else_branch, out);
    }
    void operator()(const WhileStmt& n) const {
      collect_identifiers(n.cond, out);
      collect_identifiers(n.body, out);
    }
    void operator()(const ForStmt& n) const {
      out.insert(n.binder);
      collect_identifiers(n.upper, out);
      collect_identifiers(n.body, out);
    }
  };
  std::visit(Visitor{out}, s->node);
}

std::set<std::string> collect_identifiers(const AnnotatedProgram& p) {
  std::set<std::string> out;
  if (p.precondition) collect_identifiers(p.precondition, out);
  if (p.body) collect_identifiers(p.body, out);
  if (p.postcondition) collect_identifiers(p.postcondition, out);
  if (p.cost_bound) collect_identifiers(p.cost_bound, out);
  for (const auto& [id, info] : p.oracle) {
    if (info.invariant) collect_identifiers(info.invariant, out);
    if (info.variant) collect_identifiers(info.variant, out);
    if (info.iter_bound) collect_identifiers(info.iter_bound, out);
    if (info.cost_fn) {
      out.insert(info.cost_fn->binder);
      collect_identifiers(info.cost_fn->body, out);
    }
    if (info.amortized_cost) collect_identifiers(info.amortized_cost, out);
    if (info.potential) collect_identifiers(info.potential, out);
  }
  return out;
}

std::set<std::string> program_variables(const StmtPtr& s) {
  struct Visitor {
    std::set<std::string>& out;
    void operator()(const Skip&) const {}
    void operator()(const Assign& n) const {
      out.insert(n.var);
      collect(n.value);
    }
    void operator()(const ArrAssign& n) const { collect(n.index), collect(n.value); }
    void operator()(const SeqStmt& n) const { rec(n.first), rec(n.second); }
    void operator()(const IfStmt& n) const {
      collect_bool(n.cond);
      rec(n.then_branch);
      rec(n.else_branch);
    }
    void operator()(const WhileStmt& n) const {
      collect_bool(n.cond);
      rec(n.body);
    }
    void operator()(const ForStmt& n) const {
      out.insert(n.binder);
      collect(n.upper);
      rec(n.body);
    }
    void rec(const StmtPtr& s) const { std::visit(Visitor{out}, s->node); }
    void collect(const ArithPtr& e) const {
      auto arrays = array_names(e);
      for (const auto& v : free_vars(e))
        if (!arrays.count(v)) out.insert(v);
    }
    void collect_bool(const BoolPtr& e) const {
      auto arrays = array_names(e);
      for (const auto& v : free_vars(e))
        if (!arrays.count(v)) out.insert(v);
    }
  };
  std::set<std::string> out;
  std::visit(Visitor{out}, s->node);
  return out;
}

std::vector<int> loop_ids(const StmtPtr& s) {
  struct Visitor {
    std::vector<int>& out;
    void operator()(const Skip&) const {}
    void operator()(const Assign&) const {}
    void operator()(const ArrAssign&) const {}
    void operator()(const SeqStmt& n) const { rec(n.first), rec(n.second); }
    void operator()(const IfStmt& n) const { rec(n.then_branch), rec(n.else_branch); }
    void operator()(const WhileStmt& n) const {
      out.push_back(n.loop_id);
      rec(n.body);
    }
    void operator()(const ForStmt& n) const {
      out.push_back(n.loop_id);
      rec(n.body);
    }
    void rec(const StmtPtr& s) const { std::visit(Visitor{out}, s->node); }
  };
  std::vector<int> out;
  std::visit(Visitor{out}, s->node);
  return out;
}

std::string fresh_name(const std::string& base, const std::set<std::string>& avoid) {
  if (!avoid.count(base)) return base;
  for (unsigned long long i = 1;; ++i) {
    std::string candidate = base + std::to_string(i);
    if (!avoid.count(candidate)) return candidate;
  }
}

}  // namespace timebound
