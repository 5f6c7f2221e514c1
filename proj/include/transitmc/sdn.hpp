#pragma once

#include <optional>
#include <string>
#include <vector>

#include "transitmc/ltl.hpp"
#include "transitmc/petri.hpp"

namespace transitmc {

// upd(sw.fwd(new/old)): replace sw's forwarding rule sw->old by sw->new.
// `-` on either side means "no rule" (pure insertion / pure removal).
struct SwitchUpdate {
  std::string sw;
  std::optional<std::string> next_new;
  std::optional<std::string> next_old;
};

struct UpdateExpr {
  enum class Kind { Switch, Sequential, Parallel } kind;
  SwitchUpdate update;               // Kind::Switch
  std::vector<UpdateExpr> children;  // Sequential / Parallel
};

// Network specification text format:
//
//   [switches] s1 s2 ...
//   [connections]   lines `a - b` (undirected)
//   [ingress] s1 ...
//   [egress] s4 ...
//   [forwarding]    lines `a.fwd(b)` (at most one rule per source switch)
//   [update]        one expression: `upd(x.fwd(y/z))`, `(u1 >> u2 >> ...)`,
//                   `(u1 || u2 || ...)`, or `none`
struct NetworkSpec {
  std::vector<std::string> switches;
  std::vector<std::pair<std::string, std::string>> connections;
  std::vector<std::string> ingress;
  std::vector<std::string> egress;
  std::vector<std::pair<std::string, std::string>> forwarding;
  std::optional<UpdateExpr> update;
};

NetworkSpec parse_network(const std::string& text);
NetworkSpec load_network(const std::string& path);
std::string serialize_network(const NetworkSpec& spec);
std::string render_update(const UpdateExpr& u);

// The forwarding table after the whole update has executed. Updates are
// applied in pre-order (for parallel parts the order does not matter for
// well-formed updates); removing an absent rule or inserting a duplicate is
// an error.
std::vector<std::pair<std::string, std::string>> final_forwarding(
    const NetworkSpec& spec);

// Data plane: every switch is an always-marked place; an ingress switch s
// gets transition i_<s> (chains enter the network there); each directed
// connection (x,y) gets place x.fwd(y) (marked iff the rule is in the
// initial table) and transition (x,y) that forwards chains from x to y.
// Control plane: one transition per switch update consuming its start place
// and the old rule, producing its finish place and the new rule; sequential
// and parallel composites wire start/finish places with connector (seq) or
// fork/join (par) transitions. The top-level start place is initially
// marked.
PetriNetWithTransits encode_network(const NetworkSpec& spec);

// Weak fairness over every transition of the net:
// ∧_t (◊□(∧ preset(t)) → □◊ t), built verbatim.
FormulaId fairness_assumption(FormulaArena& a, const PetriNet& net);

enum class PropertyKind { Connectivity, PacketCoherence, DropFreedom, LoopFreedom };

std::optional<PropertyKind> property_kind_from_name(const std::string& name);
const char* property_name(PropertyKind kind);

// The requirement formula (a single flow subformula):
//   connectivity:   A ◊(∨ egress)
//   coherence:      A (□(∨ Init) ∨ □(∨ Fin)), Init/Fin = switches reachable
//                   from the ingress via the initial/final forwarding table
//   drop freedom:   A □((∧_{e∈egress} ¬e) → ∨ connection transitions)
//   loop freedom:   A □(∧_{s∉egress} (s → (s U □¬s)))
// With assume_fairness the fairness assumption is an implication premise.
FormulaId property_formula(FormulaArena& a, const NetworkSpec& spec,
                           const PetriNetWithTransits& encoded,
                           PropertyKind kind, bool assume_fairness);

}  // namespace transitmc
