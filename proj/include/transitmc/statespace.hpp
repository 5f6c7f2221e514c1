#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "transitmc/petri.hpp"

namespace transitmc {

struct GraphEdge {
  std::optional<NodeId> fired;  // none = stutter self-loop at a deadlock
  std::uint32_t target;
};

// Reachable markings of a safe net under interleaving semantics. Deadlock
// states get a stutter self-loop so every maximal run is infinite. State 0
// is the initial marking; ids follow BFS discovery order, edges follow
// transition declaration order.
struct StateGraph {
  std::vector<Marking> markings;
  std::vector<std::vector<GraphEdge>> out;
  std::size_t num_edges = 0;

  std::size_t num_states() const { return markings.size(); }
};

StateGraph build_state_graph(const PetriNet& net, std::size_t max_states);

// Checks that a lasso is a run of the net: consecutive markings connected by
// fire, the loop closing back on its first marking. With strict_stutter,
// stutter steps are only allowed at deadlocks (interleaving-maximal runs);
// without it they may appear anywhere (used for counterexamples mapped back
// from a reduction, where the reduced net can block while the original
// still has enabled transitions).
bool replay_lasso(const PetriNet& net, const Lasso& lasso, bool strict_stutter);

}  // namespace transitmc
