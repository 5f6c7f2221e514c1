#pragma once

#include <cstdint>
#include <optional>

#include "transitmc/buchi.hpp"
#include "transitmc/ltl.hpp"
#include "transitmc/petri.hpp"
#include "transitmc/statespace.hpp"

namespace transitmc {

struct CheckStats {
  std::size_t reachable_states = 0;
  std::size_t buchi_states = 0;
  std::size_t product_states = 0;
};

enum class VerdictKind { Holds, Violated, BoundedHolds };

struct Verdict {
  VerdictKind kind;
  std::optional<Lasso> counterexample;
  CheckStats stats;
};

// HOLDS iff every maximal run of the net satisfies φ (interleaving-maximal:
// deadlocks stutter forever, everything else must keep firing). φ must be
// resolved against the net and FlowSub-free. VIOLATED comes with a lasso
// that replays on the net and is rejected by the direct lasso evaluator.
Verdict model_check(FormulaArena& a, const PetriNet& net, FormulaId phi,
                    std::size_t max_states);

// Same, over a prebuilt state graph (shared across several properties).
Verdict model_check_graph(FormulaArena& a, const StateGraph& graph,
                          FormulaId phi);

}  // namespace transitmc
