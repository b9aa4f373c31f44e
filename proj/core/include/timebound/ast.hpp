#pragma once

#include <map>
#include <memory>
#include <optional>
#include <set>
#include <string>
#include <variant>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

/// Abstract syntax for the annotated imperative language the toolchain
/// verifies: integer/array expressions, boolean conditions, statements with
/// identified loops, and the first-order assertion language used by
/// preconditions, postconditions, invariants and cost bounds.
namespace timebound {

/// All integer arithmetic is arbitrary precision: annotation bounds contain
/// terms like 2^k and n*n that overflow fixed width at modest inputs.
using Int = boost::multiprecision::cpp_int;

// ---------------------------------------------------------------------------
// Arithmetic expressions
// ---------------------------------------------------------------------------

struct ArithExpr;
using ArithPtr = std::shared_ptr<const ArithExpr>;

enum class ArithOp { Add, Sub, Mul, Div, Pow };

struct IntConst {
  Int value;
};
struct Var {
  std::string name;
};
/// Read of one array cell, array[index]. Arrays are total maps Int -> Int;
/// unwritten cells read as 0.
struct ArrRead {
  std::string array;
  ArithPtr index;
};
struct ArithBin {
  ArithOp op;
  ArithPtr lhs;
  ArithPtr rhs;
};
/// Binary integer maximum. Annotation-only: not executable.
struct MaxExpr {
  ArithPtr lhs;
  ArithPtr rhs;
};
/// Floor base-2 logarithm. Annotation-only: not executable; errors on
/// non-positive arguments when evaluated.
struct LogTwo {
  ArithPtr arg;
};
/// Bounded sum over an integer range, inclusive at both ends; empty when
/// upper < lower. The binder scopes over body only.
struct SumExpr {
  std::string binder;
  ArithPtr lower;
  ArithPtr upper;
  ArithPtr body;
};

struct ArithExpr {
  std::variant<IntConst, Var, ArrRead, ArithBin, MaxExpr, LogTwo, SumExpr> node;
};

// Construction helpers. Children are shared immutable nodes, so copies of
// expressions are cheap and structural sharing is safe.
ArithPtr mk_int(Int value);
ArithPtr mk_int(long long value);
ArithPtr mk_var(std::string name);
ArithPtr mk_arr_read(std::string array, ArithPtr index);
ArithPtr mk_bin(ArithOp op, ArithPtr lhs, ArithPtr rhs);
ArithPtr mk_add(ArithPtr lhs, ArithPtr rhs);
ArithPtr mk_sub(ArithPtr lhs, ArithPtr rhs);
ArithPtr mk_mul(ArithPtr lhs, ArithPtr rhs);
ArithPtr mk_div(ArithPtr lhs, ArithPtr rhs);
ArithPtr mk_pow(ArithPtr lhs, ArithPtr rhs);
ArithPtr mk_max(ArithPtr lhs, ArithPtr rhs);
ArithPtr mk_log2(ArithPtr arg);
ArithPtr mk_sum(std::string binder, ArithPtr lower, ArithPtr upper, ArithPtr body);

bool operator==(const ArithExpr& a, const ArithExpr& b);
inline bool operator!=(const ArithExpr& a, const ArithExpr& b) { return !(a == b); }
/// Structural equality through the shared pointers (null-safe).
bool equal(const ArithPtr& a, const ArithPtr& b);

// ---------------------------------------------------------------------------
// Boolean expressions (executable conditions)
// ---------------------------------------------------------------------------

struct BoolExpr;
using BoolPtr = std::shared_ptr<const BoolExpr>;

enum class CmpOp { Eq, Neq, Lt, Gt, Le, Ge };
enum class BoolOp { And, Or };

struct BoolConst {
  bool value;
};
struct Cmp {
  CmpOp op;
  ArithPtr lhs;
  ArithPtr rhs;
};
struct NotExpr {
  BoolPtr arg;
};
struct BoolBin {
  BoolOp op;
  BoolPtr lhs;
  BoolPtr rhs;
};

struct BoolExpr {
  std::variant<BoolConst, Cmp, NotExpr, BoolBin> node;
};

BoolPtr mk_bool(bool value);
BoolPtr mk_cmp(CmpOp op, ArithPtr lhs, ArithPtr rhs);
BoolPtr mk_not(BoolPtr arg);
BoolPtr mk_bbin(BoolOp op, BoolPtr lhs, BoolPtr rhs);

bool operator==(const BoolExpr& a, const BoolExpr& b);
inline bool operator!=(const BoolExpr& a, const BoolExpr& b) { return !(a == b); }
bool equal(const BoolPtr& a, const BoolPtr& b);

// ---------------------------------------------------------------------------
// Assertions (first-order specification language)
// ---------------------------------------------------------------------------

struct Assertion;
using AssertPtr = std::shared_ptr<const Assertion>;

enum class AConn { And, Or, Implies };
enum class Quant { Forall, Exists };

struct ABool {
  bool value;
};
struct ACmp {
  CmpOp op;
  ArithPtr lhs;
  ArithPtr rhs;
};
struct ANot {
  AssertPtr arg;
};
struct ABin {
  AConn op;
  AssertPtr lhs;
  AssertPtr rhs;
};
/// First-order quantifier over a scalar integer variable.
struct AQuant {
  Quant quant;
  std::string binder;
  AssertPtr body;
};

struct Assertion {
  std::variant<ABool, ACmp, ANot, ABin, AQuant> node;
};

AssertPtr mk_abool(bool value);
AssertPtr mk_acmp(CmpOp op, ArithPtr lhs, ArithPtr rhs);
AssertPtr mk_anot(AssertPtr arg);
AssertPtr mk_abin(AConn op, AssertPtr lhs, AssertPtr rhs);
AssertPtr mk_and(AssertPtr lhs, AssertPtr rhs);
AssertPtr mk_or(AssertPtr lhs, AssertPtr rhs);
AssertPtr mk_implies(AssertPtr lhs, AssertPtr rhs);
AssertPtr mk_quant(Quant quant, std::string binder, AssertPtr body);

bool operator==(const Assertion& a, const Assertion& b);
inline bool operator!=(const Assertion& a, const Assertion& b) { return !(a == b); }
bool equal(const AssertPtr& a, const AssertPtr& b);

/// Lift an executable boolean condition into the assertion language.
AssertPtr to_assertion(const BoolPtr& b);

// ---------------------------------------------------------------------------
// Statements
// ---------------------------------------------------------------------------

struct Stmt;
using StmtPtr = std::shared_ptr<const Stmt>;

/// Position of a construct in the source text (1-based), for diagnostics.
/// Not part of structural equality.
struct SourceSpan {
  int line = 0;
  int column = 0;
  int length = 0;
};

struct Skip {};
struct Assign {
  std::string var;
  ArithPtr value;
};
struct ArrAssign {
  std::string array;
  ArithPtr index;
  ArithPtr value;
};
struct SeqStmt {
  StmtPtr first;
  StmtPtr second;
};
struct IfStmt {
  BoolPtr cond;
  StmtPtr then_branch;
  StmtPtr else_branch;
};
/// While loop. loop_id numbers loops 0,1,2,... in source order and keys the
/// oracle table of the enclosing program.
struct WhileStmt {
  int loop_id = -1;
  BoolPtr cond;
  StmtPtr body;
};
/// Counting loop `for binder = lower to upper`: iterates binder over
/// lower..upper-1, re-evaluating upper each round. Only the exact-cost
/// fragment uses it; lower is restricted to a literal so every unrolling
/// step charges the same constant for the bound.
struct ForStmt {
  int loop_id = -1;
  std::string binder;
  Int lower;
  ArithPtr upper;
  StmtPtr body;
};

struct Stmt {
  std::variant<Skip, Assign, ArrAssign, SeqStmt, IfStmt, WhileStmt, ForStmt> node;
  SourceSpan span;
};

StmtPtr mk_skip(SourceSpan span = {});
StmtPtr mk_assign(std::string var, ArithPtr value, SourceSpan span = {});
StmtPtr mk_arr_assign(std::string array, ArithPtr index, ArithPtr value, SourceSpan span = {});
StmtPtr mk_seq(StmtPtr first, StmtPtr second, SourceSpan span = {});
StmtPtr mk_if(BoolPtr cond, StmtPtr then_branch, StmtPtr else_branch, SourceSpan span = {});
StmtPtr mk_while(int loop_id, BoolPtr cond, StmtPtr body, SourceSpan span = {});
StmtPtr mk_for(int loop_id, std::string binder, Int lower, ArithPtr upper, StmtPtr body,
               SourceSpan span = {});

bool operator==(const Stmt& a, const Stmt& b);
inline bool operator!=(const Stmt& a, const Stmt& b) { return !(a == b); }
bool equal(const StmtPtr& a, const StmtPtr& b);

// ---------------------------------------------------------------------------
// Programs, oracles, cost models
// ---------------------------------------------------------------------------

/// Which calculus the program's annotations target.
enum class VerifMode { Classic, Amortized, Exact };

std::string to_string(VerifMode mode);
std::optional<VerifMode> mode_from_string(const std::string& text);

/// A unary cost function supplied by the oracle, `fun binder -> body`.
/// Applied by substituting an argument expression for the binder.
struct CostFn {
  std::string binder;
  ArithPtr body;
};

/// Per-loop oracle data. Which fields are present depends on the program
/// mode: classic loops carry invariant/variant/iter_bound/cost_fn, amortized
/// loops invariant/variant/iter_bound/amortized_cost/potential, exact loops
/// only the invariant. Absent fields are null.
struct OracleInfo {
  AssertPtr invariant;
  ArithPtr variant;
  ArithPtr iter_bound;
  std::optional<CostFn> cost_fn;
  ArithPtr amortized_cost;
  ArithPtr potential;
};

bool operator==(const OracleInfo& a, const OracleInfo& b);
inline bool operator!=(const OracleInfo& a, const OracleInfo& b) { return !(a == b); }

/// A full verification unit: { precondition } body { postcondition | bound }
/// plus per-loop oracle annotations.
struct AnnotatedProgram {
  VerifMode mode = VerifMode::Classic;
  AssertPtr precondition;
  StmtPtr body;
  AssertPtr postcondition;
  ArithPtr cost_bound;
  std::map<int, OracleInfo> oracle;
};

bool operator==(const AnnotatedProgram& a, const AnnotatedProgram& b);
inline bool operator!=(const AnnotatedProgram& a, const AnnotatedProgram& b) { return !(a == b); }

/// Atomic cost model: a non-negative price per syntactic operation. Every
/// name defaults to 1 (the "unit" model).
class CostModel {
 public:
  /// The full set of atomic cost names, in canonical order.
  static const std::vector<std::string>& names();
  static bool is_name(const std::string& name);

  /// All costs 1.
  static CostModel unit();

  /// Price of one atomic operation. The name must be one of names().
  Int at(const std::string& name) const;
  /// Sets a price; throws std::invalid_argument for unknown names or
  /// negative values.
  void set(const std::string& name, Int value);

  bool operator==(const CostModel& other) const { return costs_ == other.costs_; }

 private:
  std::map<std::string, Int> costs_;  // sparse: absent means 1
};

// ---------------------------------------------------------------------------
// Variables, identifiers, freshness
// ---------------------------------------------------------------------------

/// Free variables of an expression/assertion: scalar names plus array names.
/// Sum and quantifier binders are bound in their bodies.
std::set<std::string> free_vars(const ArithPtr& e);
std::set<std::string> free_vars(const BoolPtr& e);
std::set<std::string> free_vars(const AssertPtr& a);

/// Names of the arrays read (or written, for statements) by a construct.
std::set<std::string> array_names(const ArithPtr& e);
std::set<std::string> array_names(const BoolPtr& e);
std::set<std::string> array_names(const AssertPtr& a);
std::set<std::string> array_names(const StmtPtr& s);

/// Every identifier that occurs anywhere, bound or free, including array
/// names. Used as the avoid-set when inventing logic variables, so generated
/// names can never collide with program or annotation names.
void collect_identifiers(const ArithPtr& e, std::set<std::string>& out);
void collect_identifiers(const BoolPtr& e, std::set<std::string>& out);
void collect_identifiers(const AssertPtr& a, std::set<std::string>& out);
void collect_identifiers(const StmtPtr& s, std::set<std::string>& out);
std::set<std::string> collect_identifiers(const AnnotatedProgram& p);

/// Scalar variables assigned or read by a statement, and the loop ids in
/// source order.
std::set<std::string> program_variables(const StmtPtr& s);
std::vector<int> loop_ids(const StmtPtr& s);

/// Returns base if it is not in avoid, otherwise base followed by the
/// smallest decimal suffix >= 1 that avoids a collision.
std::string fresh_name(const std::string& base, const std::set<std::string>& avoid);

}  // namespace timebound
