#pragma once

#include <stdexcept>
#include <vector>

#include "timebound/ast.hpp"
#include "timebound/costsem.hpp"

namespace timebound {

/// Weakest precondition together with the symbolic cost of the statement it
/// was computed for.
struct WpResult {
  AssertPtr wp;
  ArithPtr cost;
};

/// Which proof rule a verification condition came from.
enum class Provenance {
  Correctness,
  CostBound,
  InvariantPreservation,
  LoopExit,
  TerminationBound,
  PotentialNonneg,
  AmortizedCost,
  ExactBranchBalance,
  ExitImpliesPost,
};

std::string to_string(Provenance provenance);

/// One proof obligation. Formulas may contain free logic variables (the
/// per-loop k and pk); the emitter universally closes them. loop_id is empty
/// for the two top-level conditions.
struct VerificationCondition {
  std::string name;
  Provenance provenance;
  std::optional<int> loop_id;
  AssertPtr formula;
};

/// Oracle data needed by the requested calculus is absent for a loop.
class OracleError : public std::runtime_error {
 public:
  OracleError(int loop_id, const std::string& message)
      : std::runtime_error(message), loop_id_(loop_id) {}
  int loop_id() const { return loop_id_; }

 private:
  int loop_id_;
};

struct VcgOptions {
  /// Charge an if as t1+t2 instead of max(t1, t2) in the classic and
  /// amortized calculi.
  bool if_cost_sum = false;
  CostSemOptions costsem;
};

/// Weakest precondition with cost under the given calculus. Classic and
/// amortized reject for loops; exact rejects while loops.
WpResult wpc(const StmtPtr& s, const AssertPtr& post, VerifMode mode, const CostModel& m,
             const std::map<int, OracleInfo>& oracle, const VcgOptions& opts = {});

/// The per-loop verification conditions of a statement against a
/// postcondition: 4 per classic while, 5 per amortized while, 3 per exact
/// for, in source order, each named "<while|for><id>.<provenance>".
std::vector<VerificationCondition> vc(const StmtPtr& s, const AssertPtr& post, VerifMode mode,
                                      const CostModel& m,
                                      const std::map<int, OracleInfo>& oracle,
                                      const VcgOptions& opts = {});

/// The full verification-condition set of a program: main.correctness
/// (P implies the body's weakest precondition), main.cost-bound (the
/// declared bound dominates — or in exact mode equals — the computed cost),
/// then the per-loop conditions.
std::vector<VerificationCondition> vcg(const AnnotatedProgram& p, const CostModel& m,
                                       const VcgOptions& opts = {});

}  // namespace timebound
