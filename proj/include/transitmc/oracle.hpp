#pragma once

#include <cstdint>

#include "transitmc/ltl.hpp"
#include "transitmc/modelcheck.hpp"
#include "transitmc/petri.hpp"

namespace transitmc {

// Direct LTL evaluation on an ultimately periodic word (position k + |loop|
// coincides with position k past the prefix). Handles every operator of the
// surface syntax, no FlowSub. Used as the reference semantics in tests.
bool eval_ltl_on_lasso(const FormulaArena& a, FormulaId f, const Lasso& lasso);

// A flow chain of a lasso, collapsed to its own timeline: one letter per
// chain move (the place it sat on + the transition that moved it away), and
// once it stops moving (killed, parked forever, or the run deadlocks) an
// infinite stutter on its final place with no transition atom true.
//
// True iff every chain of the lasso satisfies body. Chains are enumerated
// per creation point; a chain evolution closes into a loop at the first
// repeat of (lasso position, place). Forks explore every branch, but a
// branch that leaves a cycle after re-entering it is not enumerated twice
// (one loop unrolling per creation point). Throws BudgetError past
// chain_budget chains.
bool eval_flow_on_lasso(const FormulaArena& a, const PetriNetWithTransits& net,
                        const Lasso& lasso, FormulaId body,
                        std::size_t chain_budget = 10000);

// Enumerates every lasso of the state graph with |prefix| + |loop| ≤ bound
// and reports the first one whose run formula evaluates to false, with each
// FlowSub replaced by its eval_flow_on_lasso value (chains quantified over
// the whole lasso). BOUNDED_HOLDS otherwise; deliberately incomplete.
Verdict brute_force_check(FormulaArena& a, const PetriNetWithTransits& net,
                          FormulaId flow_ltl, std::size_t bound,
                          std::size_t max_states,
                          std::size_t max_lassos = 5000000);

}  // namespace transitmc
