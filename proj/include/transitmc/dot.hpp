#pragma once

#include <string>

#include "transitmc/petri.hpp"
#include "transitmc/statespace.hpp"

namespace transitmc {

// Graphviz rendering of a net: places as circles (marked: double border),
// transitions as boxes, inhibitor arcs dotted with a dot arrowhead, transits
// as dashed colored edges from source place to target place (creation
// transits start at the transition box). Output is deterministic.
std::string dot_net(const PetriNetWithTransits& net);
// Without transit edges (reduced nets).
std::string dot_net(const PetriNet& net);

// The reachable state graph: one node per marking (labeled with the marked
// places), edges labeled with the fired transition; stutter self-loops are
// drawn dashed.
std::string dot_state_graph(const PetriNet& net, const StateGraph& graph);

void write_file(const std::string& path, const std::string& content);

}  // namespace transitmc
