#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include "timebound/ast.hpp"
#include "timebound/eval.hpp"
#include "timebound/interp.hpp"

namespace timebound {

/// Integer box the sampler draws from. Raw draws always stay inside the box;
/// the repair passes may then derive dependent values (e.g. size = log(n))
/// from the drawn ones, as dictated by the precondition itself.
struct SamplerConfig {
  Int scalar_lo = -16;
  Int scalar_hi = 16;
  Int cell_lo = 0;
  Int cell_hi = 16;
  Int extent_lo = 0;
  Int extent_hi = 16;
  /// Per-scalar range overrides, e.g. force n into 1..64.
  std::map<std::string, std::pair<Int, Int>> overrides;
  /// Domain for quantifier instantiation while testing satisfaction.
  QuantBounds quant;
};

/// Thrown when rejection sampling finds no accepted state at all within
/// 10 000 * trials attempts.
class SamplingExhausted : public std::runtime_error {
 public:
  explicit SamplingExhausted(const std::string& message) : std::runtime_error(message) {}
};

struct SampleStats {
  long long attempts = 0;
  long long accepted = 0;
  double acceptance_rate() const {
    return attempts == 0 ? 0.0 : static_cast<double>(accepted) / static_cast<double>(attempts);
  }
};

/// Draws up to `trials` states satisfying `pre` by rejection sampling over
/// the configured box: scalars from their ranges, then for each array an
/// extent and that many cells. Before the accept test, deterministic repair
/// passes massage the draw toward the precondition's top-level conjuncts:
/// scalar equalities pin the variable to the evaluated right-hand side,
/// forall conjuncts fill array cells forced to a constant over the
/// quantifier domain, pairwise order constraints sort the drawn cells, and
/// existential witnesses are pinned at a random domain index. The final
/// accept re-evaluates `pre`, so no repair can admit a violating state.
/// Deterministic given the seed.
std::vector<ProgramState> sample_state(const AssertPtr& pre,
                                       const std::set<std::string>& scalars,
                                       const std::set<std::string>& arrays, long long trials,
                                       std::uint64_t seed, const SamplerConfig& config = {},
                                       SampleStats* stats = nullptr);

/// One failed check, with everything needed to replay it by hand.
struct Violation {
  long long trial = 0;
  std::string category;
  std::string detail;
  ProgramState state;        ///< witness initial state
  std::optional<Int> measured;  ///< measured cost, when the check compares costs
  std::optional<Int> bound;     ///< evaluated bound, when the check compares costs
};

struct HarnessReport {
  std::string name;
  long long trials = 0;   ///< trials requested
  long long sampled = 0;  ///< states actually obtained and run
  long long skipped = 0;  ///< trials skipped (evaluation errors on both sides)
  std::uint64_t seed = 0;
  std::vector<Violation> violations;

  bool ok() const { return violations.empty(); }
  /// Line-oriented rendering: one summary line, then the first witness per
  /// violation category.
  std::string to_text() const;
};

/// Renders a state as "x=3 a[0]=5 ..." for reports.
std::string describe(const ProgramState& state);

struct HarnessOptions {
  SamplerConfig sampler;
  ExecOptions exec;
};

/// Empirical soundness check: for each sampled initial state satisfying the
/// precondition, executes the program and asserts (a) the postcondition
/// holds in the final state and (b) the bound evaluated in the initial state
/// is >= the measured cost (classic/amortized) or exactly equal (exact).
/// Interpreter errors become report entries, never exceptions.
HarnessReport check_bound(const AnnotatedProgram& p, const CostModel& m, long long trials,
                          std::uint64_t seed, const HarnessOptions& opts = {});

/// Instruments every annotated while loop of an amortized program and checks
/// the potential-method identities at runtime: the potential is 0 on loop
/// entry, stays >= 0 after every iteration, and each iteration's actual body
/// cost is covered by the amortized budget plus the potential drop:
/// a + phi_before - phi_after >= t_i.
HarnessReport check_amortized_telescoping(const AnnotatedProgram& p, const CostModel& m,
                                          long long trials, std::uint64_t seed,
                                          const HarnessOptions& opts = {});

/// Property test for the substitution lemma: for random assertion P,
/// variable x, arithmetic expression a and state s (depth <= 4),
///     s |= P[a/x]   iff   s[x := value of a in s] |= P.
/// Trials where either side raises an evaluation error are skipped
/// symmetrically.
HarnessReport check_substitution_lemma(long long trials, std::uint64_t seed);

}  // namespace timebound
