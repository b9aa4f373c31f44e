#include "timebound/emit.hpp"

#include <sys/wait.h>
#include <unistd.h>

#include <atomic>
#include <cctype>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "timebound/parser.hpp"
#include "timebound/subst.hpp"

namespace timebound {

std::string to_string(GoalStatus status) {
  switch (status) {
    case GoalStatus::Unknown: return "Unknown";
    case GoalStatus::Valid: return "Valid";
    case GoalStatus::Invalid: return "Invalid";
    case GoalStatus::SolverError: return "SolverError";
    case GoalStatus::Timeout: return "Timeout";
  }
  return "Unknown";
}

AssertPtr close_formula(const AssertPtr& formula) {
  std::set<std::string> free = free_vars(formula);
  for (const std::string& array : array_names(formula)) free.erase(array);
  AssertPtr closed = formula;
  for (auto it = free.rbegin(); it != free.rend(); ++it)
    closed = mk_quant(Quant::Forall, *it, closed);
  return closed;
}

std::string render_text(const VerificationCondition& vc) {
  return pretty(close_formula(vc.formula));
}

namespace {

Int floor_log2_value(const Int& value) {
  return static_cast<long long>(boost::multiprecision::msb(value));
}

/// Collects declarations while translating a formula to SMT-LIB terms.
class SmtEncoder {
 public:
  std::string encode(const AssertPtr& formula) {
    std::set<std::string> bound;
    return enc_assert(formula, bound);
  }

  void emit_prelude(std::ostream& os) const {
    for (const std::string& name : consts_) os << "(declare-const " << sym(name) << " Int)\n";
    for (const std::string& name : arrays_)
      os << "(declare-const " << sym(name) << " (Array Int Int))\n";
    if (needs_tdiv_)
      os << "(define-fun tdiv ((a Int) (b Int)) Int"
            " (ite (>= a 0) (div a b) (- (div (- a) b))))\n";
    if (needs_tpow_)
      os << "(define-fun-rec tpow ((b Int) (e Int)) Int"
            " (ite (<= e 0) 1 (* b (tpow b (- e 1)))))\n";
    if (needs_tmax_)
      os << "(define-fun tmax ((a Int) (b Int)) Int (ite (>= a b) a b))\n";
    if (needs_log2_) {
      os << "(declare-fun log2 (Int) Int)\n";
      Int power = 1;
      for (int j = 0; j <= 20; ++j) {
        os << "(assert (= (log2 " << num(power) << ") " << j << "))\n";
        power *= 2;
      }
      for (const Int& arg : log_args_)
        os << "(assert (= (log2 " << num(arg) << ") " << num(floor_log2_value(arg)) << "))\n";
    }
    for (const std::string& definition : sum_defs_) os << definition << '\n';
  }

 private:
  static std::string sym(const std::string& name) {
    static const std::set<std::string> reserved = {
        "div", "mod", "abs", "ite", "let", "as", "select", "store", "true", "false",
        "and", "or", "not", "xor", "forall", "exists", "assert", "Int", "Bool", "Array",
        "tdiv", "tpow", "tmax", "log2", "max", "min", "distinct"};
    bool simple = !name.empty() && !std::isdigit(static_cast<unsigned char>(name[0]));
    for (char c : name)
      if (!std::isalnum(static_cast<unsigned char>(c)) && c != '_') simple = false;
    if (simple && reserved.find(name) == reserved.end()) return name;
    return "|" + name + "|";
  }

  static std::string num(const Int& value) {
    if (value < 0) return "(- " + Int(-value).str() + ")";
    return value.str();
  }

  void touch_var(const std::string& name, const std::set<std::string>& bound) {
    if (bound.find(name) == bound.end()) consts_.insert(name);
  }
  void touch_array(const std::string& name, const std::set<std::string>& bound) {
    if (bound.find(name) == bound.end()) arrays_.insert(name);
  }

  std::string enc_arith(const ArithPtr& e, std::set<std::string>& bound) {
    return std::visit(
        [&](const auto& n) -> std::string {
          using T = std::decay_t<decltype(n)>;
          if constexpr (std::is_same_v<T, IntConst>) {
            return num(n.value);
          } else if constexpr (std::is_same_v<T, Var>) {
            touch_var(n.name, bound);
            return sym(n.name);
          } else if constexpr (std::is_same_v<T, ArrRead>) {
            touch_array(n.array, bound);
            return "(select " + sym(n.array) + " " + enc_arith(n.index, bound) + ")";
          } else if constexpr (std::is_same_v<T, ArithBin>) {
            std::string lhs = enc_arith(n.lhs, bound);
            std::string rhs = enc_arith(n.rhs, bound);
            switch (n.op) {
              case ArithOp::Add: return "(+ " + lhs + " " + rhs + ")";
              case ArithOp::Sub: return "(- " + lhs + " " + rhs + ")";
              case ArithOp::Mul: return "(* " + lhs + " " + rhs + ")";
              case ArithOp::Div:
                needs_tdiv_ = true;
                return "(tdiv " + lhs + " " + rhs + ")";
              case ArithOp::Pow:
                needs_tpow_ = true;
                return "(tpow " + lhs + " " + rhs + ")";
            }
            throw std::logic_error("unreachable arithmetic operator");
          } else if constexpr (std::is_same_v<T, MaxExpr>) {
            needs_tmax_ = true;
            return "(tmax " + enc_arith(n.lhs, bound) + " " + enc_arith(n.rhs, bound) + ")";
          } else if constexpr (std::is_same_v<T, LogTwo>) {
            needs_log2_ = true;
            if (const auto* lit = std::get_if<IntConst>(&n.arg->node); lit && lit->value >= 1)
              log_args_.insert(lit->value);
            return "(log2 " + enc_arith(n.arg, bound) + ")";
          } else {
            static_assert(std::is_same_v<T, SumExpr>);
            return enc_sum(n, bound);
          }
        },
        e->node);
  }

  std::string enc_sum(const SumExpr& n, std::set<std::string>& bound) {
    const auto* lo = std::get_if<IntConst>(&n.lower->node);
    const auto* hi = std::get_if<IntConst>(&n.upper->node);
    if (lo && hi) {
      if (hi->value < lo->value) return "0";
      if (hi->value - lo->value + 1 <= 32) {
        std::vector<std::string> terms;
        for (Int i = lo->value; i <= hi->value; ++i)
          terms.push_back(enc_arith(subst_aexp(n.body, n.binder, mk_int(i)), bound));
        if (terms.size() == 1) return terms.front();
        std::string out = "(+";
        for (const std::string& t : terms) out += " " + t;
        return out + ")";
      }
    }
    const SumFn& fn = sum_fn_for(n);
    std::string call = "(" + fn.name + " " + enc_arith(n.lower, bound) + " " +
                       enc_arith(n.upper, bound);
    for (const std::string& p : fn.params) {
      touch_var(p, bound);
      call += " " + sym(p);
    }
    for (const std::string& a : fn.arrays) {
      touch_array(a, bound);
      call += " " + sym(a);
    }
    return call + ")";
  }

  struct SumFn {
    std::string name;
    std::vector<std::string> params;
    std::vector<std::string> arrays;
  };

  const SumFn& sum_fn_for(const SumExpr& n) {
    ArithPtr body_expr = mk_sum(n.binder, mk_int(0), mk_int(0), n.body);
    std::string key = n.binder + "\x1f" + pretty(n.body);
    auto it = sum_fns_.find(key);
    if (it != sum_fns_.end()) return it->second;

    SumFn fn;
    fn.name = "sum" + std::to_string(sum_fns_.size());
    std::set<std::string> body_free = free_vars(n.body);
    std::set<std::string> body_arrays = array_names(n.body);
    body_free.erase(n.binder);
    for (const std::string& a : body_arrays) body_free.erase(a);
    fn.params.assign(body_free.begin(), body_free.end());
    fn.arrays.assign(body_arrays.begin(), body_arrays.end());

    std::set<std::string> taken;
    collect_identifiers(n.body, taken);
    taken.insert(n.binder);
    std::string hi_name = fresh_name(n.binder + "_hi", taken);

    std::set<std::string> local;
    local.insert(n.binder);
    local.insert(fn.params.begin(), fn.params.end());
    local.insert(fn.arrays.begin(), fn.arrays.end());
    std::string body_txt = enc_arith(n.body, local);

    std::ostringstream def;
    def << "(define-fun-rec " << fn.name << " ((" << sym(n.binder) << " Int) (" << sym(hi_name)
        << " Int)";
    for (const std::string& p : fn.params) def << " (" << sym(p) << " Int)";
    for (const std::string& a : fn.arrays) def << " (" << sym(a) << " (Array Int Int))";
    def << ") Int\n  (ite (> " << sym(n.binder) << " " << sym(hi_name) << ") 0\n    (+ "
        << body_txt << "\n       (" << fn.name << " (+ " << sym(n.binder) << " 1) "
        << sym(hi_name);
    for (const std::string& p : fn.params) def << " " << sym(p);
    for (const std::string& a : fn.arrays) def << " " << sym(a);
    def << "))))";
    sum_defs_.push_back(def.str());
    return sum_fns_.emplace(std::move(key), std::move(fn)).first->second;
  }

  std::string enc_assert(const AssertPtr& a, std::set<std::string>& bound) {
    return std::visit(
        [&](const auto& n) -> std::string {
          using T = std::decay_t<decltype(n)>;
          if constexpr (std::is_same_v<T, ABool>) {
            return n.value ? "true" : "false";
          } else if constexpr (std::is_same_v<T, ACmp>) {
            std::string lhs = enc_arith(n.lhs, bound);
            std::string rhs = enc_arith(n.rhs, bound);
            switch (n.op) {
              case CmpOp::Eq: return "(= " + lhs + " " + rhs + ")";
              case CmpOp::Neq: return "(not (= " + lhs + " " + rhs + "))";
              case CmpOp::Lt: return "(< " + lhs + " " + rhs + ")";
              case CmpOp::Gt: return "(> " + lhs + " " + rhs + ")";
              case CmpOp::Le: return "(<= " + lhs + " " + rhs + ")";
              case CmpOp::Ge: return "(>= " + lhs + " " + rhs + ")";
            }
            throw std::logic_error("unreachable comparison operator");
          } else if constexpr (std::is_same_v<T, ANot>) {
            return "(not " + enc_assert(n.arg, bound) + ")";
          } else if constexpr (std::is_same_v<T, ABin>) {
            std::string lhs = enc_assert(n.lhs, bound);
            std::string rhs = enc_assert(n.rhs, bound);
            switch (n.op) {
              case AConn::And: return "(and " + lhs + " " + rhs + ")";
              case AConn::Or: return "(or " + lhs + " " + rhs + ")";
              case AConn::Implies: return "(=> " + lhs + " " + rhs + ")";
            }
            throw std::logic_error("unreachable connective");
          } else {
            static_assert(std::is_same_v<T, AQuant>);
            bool inserted = bound.insert(n.binder).second;
            std::string body = enc_assert(n.body, bound);
            if (inserted) bound.erase(n.binder);
            return std::string(n.quant == Quant::Forall ? "(forall" : "(exists") + " ((" +
                   sym(n.binder) + " Int)) " + body + ")";
          }
        },
        a->node);
  }

  std::set<std::string> consts_;
  std::set<std::string> arrays_;
  bool needs_tdiv_ = false;
  bool needs_tpow_ = false;
  bool needs_tmax_ = false;
  bool needs_log2_ = false;
  std::set<Int> log_args_;
  std::vector<std::string> sum_defs_;
  std::map<std::string, SumFn> sum_fns_;
};

}  // namespace

std::string render_smt(const VerificationCondition& vc) {
  SmtEncoder encoder;
  std::string matrix = encoder.encode(vc.formula);
  std::ostringstream os;
  os << "; goal: " << vc.name << "\n";
  os << "(set-logic ALL)\n";
  encoder.emit_prelude(os);
  os << "(assert (not " << matrix << "))\n";
  os << "(check-sat)\n";
  return os.str();
}

GoalDocument make_goal(const VerificationCondition& vc) {
  GoalDocument goal;
  goal.vc_name = vc.name;
  goal.logic_text = render_text(vc);
  goal.smt_text = render_smt(vc);
  return goal;
}

BruteResult brute_check(const VerificationCondition& vc, const BruteOptions& opts) {
  const AssertPtr& formula = vc.formula;
  if (!array_names(formula).empty()) return {GoalStatus::Unknown, std::nullopt};

  std::set<std::string> free = free_vars(formula);
  std::vector<std::string> vars(free.begin(), free.end());
  std::vector<std::pair<Int, Int>> ranges;
  Int combinations = 1;
  for (const std::string& var : vars) {
    auto it = opts.var_ranges.find(var);
    std::pair<Int, Int> range =
        it != opts.var_ranges.end() ? it->second : std::make_pair(opts.lo, opts.hi);
    if (range.second < range.first) return {GoalStatus::Unknown, std::nullopt};
    ranges.push_back(range);
    combinations *= range.second - range.first + 1;
    if (combinations > opts.max_assignments) return {GoalStatus::Unknown, std::nullopt};
  }

  QuantBounds quant_bounds;
  quant_bounds.lo = opts.lo;
  quant_bounds.hi = opts.hi;

  std::vector<Int> current;
  for (const auto& range : ranges) current.push_back(range.first);
  while (true) {
    ProgramState state;
    for (std::size_t i = 0; i < vars.size(); ++i) state.set_scalar(vars[i], current[i]);
    try {
      if (!satisfies(formula, state, quant_bounds))
        return {GoalStatus::Invalid, std::move(state)};
    } catch (const EvalError&) {
      // Partial-operation error: this assignment proves nothing either way.
    }
    std::size_t i = 0;
    for (; i < current.size(); ++i) {
      if (current[i] < ranges[i].second) {
        ++current[i];
        break;
      }
      current[i] = ranges[i].first;
    }
    if (i == current.size()) break;
  }
  return {GoalStatus::Valid, std::nullopt};
}

GoalDocument run_solver(GoalDocument goal, const std::string& solver_cmd, int timeout_sec) {
  try {
    namespace fs = std::filesystem;
    static std::atomic<unsigned> counter{0};
    fs::path file = fs::temp_directory_path() /
                    ("timebound-goal-" + std::to_string(::getpid()) + "-" +
                     std::to_string(counter.fetch_add(1)) + ".smt2");
    {
      std::ofstream out(file);
      out << goal.smt_text;
    }
    std::string command = "timeout " + std::to_string(timeout_sec < 1 ? 1 : timeout_sec) + "s " +
                          solver_cmd + " < '" + file.string() + "' 2>/dev/null";
    FILE* pipe = ::popen(command.c_str(), "r");
    if (!pipe) {
      fs::remove(file);
      goal.status = GoalStatus::SolverError;
      return goal;
    }
    std::string output;
    char buffer[4096];
    std::size_t got;
    while ((got = std::fread(buffer, 1, sizeof(buffer), pipe)) > 0) output.append(buffer, got);
    int raw_status = ::pclose(pipe);
    fs::remove(file);
    int exit_code = WIFEXITED(raw_status) ? WEXITSTATUS(raw_status) : -1;

    std::optional<GoalStatus> verdict;
    std::istringstream words(output);
    std::string word;
    while (!verdict && words >> word) {
      if (word == "unsat") verdict = GoalStatus::Valid;
      else if (word == "sat") verdict = GoalStatus::Invalid;
      else if (word == "unknown") verdict = GoalStatus::Unknown;
    }
    if (exit_code == 124) {
      goal.status = GoalStatus::Timeout;  // killed by the timeout wrapper
    } else if (verdict && exit_code == 0) {
      goal.status = *verdict;
    } else if (verdict) {
      goal.status = *verdict;
    } else {
      goal.status = GoalStatus::SolverError;
    }
  } catch (...) {
    goal.status = GoalStatus::SolverError;
  }
  return goal;
}

}  // namespace timebound
