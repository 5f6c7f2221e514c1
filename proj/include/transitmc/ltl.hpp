#pragma once

#include <cstdint>
#include <string>
#include <unordered_map>
#include <vector>

#include "transitmc/petri.hpp"

namespace transitmc {

using FormulaId = std::uint32_t;
inline constexpr FormulaId kNoFormula = 0xFFFFFFFFu;

enum class FKind : std::uint8_t {
  True,
  False,
  Atom,
  Not,
  And,
  Or,
  Imp,
  Next,
  Until,
  WeakUntil,
  Release,
  Always,
  Eventually,
  FlowSub,  // `A φ`
};

enum class AtomKind : std::uint8_t { Unresolved, Place, Transition };

struct FNode {
  FKind kind;
  FormulaId lhs = kNoFormula;  // unary operand / left operand / FlowSub body
  FormulaId rhs = kNoFormula;
  std::uint32_t aux = 0;  // Atom: name table index; FlowSub: 1-based index
  AtomKind atom_kind = AtomKind::Unresolved;
  NodeId atom_node = 0;

  bool operator==(const FNode& o) const {
    return kind == o.kind && lhs == o.lhs && rhs == o.rhs && aux == o.aux &&
           atom_kind == o.atom_kind && atom_node == o.atom_node;
  }
};

// Hash-consing arena. Structurally equal formulas get the same id, so
// formula equality is id equality and substitution output is a DAG. Ids are
// assigned in creation order, which keeps downstream automata deterministic.
class FormulaArena {
 public:
  FormulaId tru() { return intern({FKind::True}); }
  FormulaId fls() { return intern({FKind::False}); }
  FormulaId atom(const std::string& name);
  FormulaId atom_resolved(const std::string& name, AtomKind kind, NodeId node);
  FormulaId place_atom(const PetriNet& net, NodeId p) {
    return atom_resolved(net.place_name(p), AtomKind::Place, p);
  }
  FormulaId transition_atom(const PetriNet& net, NodeId t) {
    return atom_resolved(net.transition_name(t), AtomKind::Transition, t);
  }

  FormulaId f_not(FormulaId a) { return intern({FKind::Not, a}); }
  FormulaId f_and(FormulaId a, FormulaId b) { return intern({FKind::And, a, b}); }
  FormulaId f_or(FormulaId a, FormulaId b) { return intern({FKind::Or, a, b}); }
  FormulaId f_imp(FormulaId a, FormulaId b) { return intern({FKind::Imp, a, b}); }
  FormulaId f_next(FormulaId a) { return intern({FKind::Next, a}); }
  FormulaId f_until(FormulaId a, FormulaId b) {
    return intern({FKind::Until, a, b});
  }
  FormulaId f_wuntil(FormulaId a, FormulaId b) {
    return intern({FKind::WeakUntil, a, b});
  }
  FormulaId f_release(FormulaId a, FormulaId b) {
    return intern({FKind::Release, a, b});
  }
  FormulaId f_always(FormulaId a) { return intern({FKind::Always, a}); }
  FormulaId f_eventually(FormulaId a) {
    return intern({FKind::Eventually, a});
  }
  // `index` is 1-based and must be unique within one formula; bodies may not
  // contain FlowSub nodes themselves.
  FormulaId f_flowsub(std::uint32_t index, FormulaId body);

  // Left-associative folds; empty disjunction is FALSE, empty conjunction TRUE.
  FormulaId or_all(const std::vector<FormulaId>& xs);
  FormulaId and_all(const std::vector<FormulaId>& xs);

  const FNode& node(FormulaId f) const { return nodes_[f]; }
  const std::string& atom_name(const FNode& n) const {
    return atom_names_[n.aux];
  }
  std::size_t num_nodes() const { return nodes_.size(); }

  // Number of distinct nodes reachable from f.
  std::size_t dag_size(FormulaId f) const;

 private:
  FormulaId intern(FNode n);

  struct NodeHash {
    std::size_t operator()(const FNode& n) const;
  };

  std::vector<FNode> nodes_;
  std::unordered_map<FNode, FormulaId, NodeHash> node_ids_;
  std::vector<std::string> atom_names_;
  std::unordered_map<std::string, std::uint32_t> atom_ids_;
};

// Bodies of the FlowSub occurrences, ordered by their 1-based index; checks
// the indices form 1..n.
std::vector<FormulaId> flow_subformulas(const FormulaArena& a, FormulaId f);

bool contains_flowsub(const FormulaArena& a, FormulaId f);

// Resolves every atom against the net (place or transition); throws
// ParseError listing all unknown atoms.
FormulaId resolve_atoms(FormulaArena& a, FormulaId f, const PetriNet& net);

// Negation normal form of ¬f over the core operators True/False/Atom/
// Not(atom)/And/Or/Next/Until/Release. Rejects FlowSub.
FormulaId negate_nnf(FormulaArena& a, FormulaId f);
// NNF of f itself.
FormulaId to_nnf(FormulaArena& a, FormulaId f);

}  // namespace transitmc
