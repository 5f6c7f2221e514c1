#pragma once

#include <iosfwd>
#include <string>

#include "transitmc/petri.hpp"

namespace transitmc {

// Line-based net format:
//
//   [net] name
//   [places] p1 p2 ...
//   [initial] p1 ...
//   [transitions] t1 t2 ...
//   [arcs]        lines `p -> t` and `t -> p`
//   [inhibitors]  lines `p -o t`
//   [transits]    lines `t: p -> q` and `t: > -> q`
//
// `#` starts a comment. Identifiers match [A-Za-z_][A-Za-z0-9_.]*.
// Arc weights are 1; repeating an arc is an error.
PetriNetWithTransits parse_net(const std::string& text);
PetriNetWithTransits load_net(const std::string& path);

// Canonical form: declaration order for places/transitions, arcs grouped by
// transition, transits in their stored order. parse(serialize(n)) == n.
std::string serialize_net(const PetriNetWithTransits& net);
// Without a transits section (reduced nets).
std::string serialize_net(const PetriNet& net);

bool is_identifier(const std::string& s);

}  // namespace transitmc
