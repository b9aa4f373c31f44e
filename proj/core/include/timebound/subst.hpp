#pragma once

#include "timebound/ast.hpp"

namespace timebound {

/// Capture-avoiding substitution of an arithmetic expression for a scalar
/// variable. Sum binders shadow; a binder whose name occurs free in the
/// replacement is alpha-renamed (primed, then numbered) before descending.
ArithPtr subst_aexp(const ArithPtr& e, const std::string& var, const ArithPtr& replacement);

/// Same substitution lifted to boolean conditions.
BoolPtr subst_bexp(const BoolPtr& e, const std::string& var, const ArithPtr& replacement);

/// Same substitution lifted to assertions; quantifier binders shadow and are
/// alpha-renamed on capture, like sum binders.
AssertPtr subst_assertion(const AssertPtr& a, const std::string& var, const ArithPtr& replacement);

/// Effect of the array write array[index] := value on an assertion: every
/// read array[e] splits into the two cases e = index (the read yields value)
/// and e != index (the read is unchanged). The assertion language has no
/// store primitive, so the split is realized as a guarded conjunction at
/// each atomic comparison; with m reads of the array in one atom this
/// produces 2^m guarded cases. Quantifier and sum binders occurring free in
/// index/value are alpha-renamed first so guards never capture. Reads under
/// a sum binder cannot carry a guard (it would escape the binder), so the
/// whole sum is split on whether index lies in its range; this requires the
/// body to read the array only at the binder itself, and anything more
/// exotic throws std::runtime_error.
AssertPtr subst_array(const AssertPtr& a, const std::string& array, const ArithPtr& index,
                      const ArithPtr& value);

}  // namespace timebound
