#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "transitmc/ltl.hpp"
#include "transitmc/petri.hpp"

namespace transitmc {

// One letter of a trace: the marking before a step plus the transition fired
// at that step (none for stutter steps).
struct Letter {
  const Marking* marking;
  std::optional<NodeId> fired;
};

// Evaluates a propositional (no temporal operators) formula on a letter.
bool eval_prop_letter(const FormulaArena& a, FormulaId f, const Letter& l);

// Generalized Büchi automaton with target-labeled edges: the edge into state
// q may be taken when the letter satisfies q's literals. State 0 is a virtual
// initial state with no incoming edges and an empty label.
//
// Acceptance sets 0..num_tableau_sets-1 are state-based (a run is accepting
// for set k when it visits states with bit k infinitely often); sets
// num_tableau_sets..num_sets-1 are letter-based fairness constraints (the
// run's letters must satisfy fairness_props[k - num_tableau_sets]
// infinitely often). The fairness sets come from conjuncts of shape
// GF(prop) (or disjunctions of such), pulled out before the tableau both to
// keep it small and to make fairness assumptions cheap.
struct BuchiState {
  std::vector<FormulaId> pos_lits;  // atoms that must hold on entry
  std::vector<FormulaId> neg_lits;  // atoms that must be false on entry
  std::vector<std::uint32_t> succ;  // ascending
  std::uint64_t acc_mask = 0;       // tableau sets (state-based)
};

struct BuchiAutomaton {
  std::vector<BuchiState> states;  // [0] = virtual initial
  std::uint32_t num_tableau_sets = 0;
  std::uint32_t num_sets = 0;
  std::vector<FormulaId> fairness_props;

  std::uint64_t full_mask() const {
    return num_sets == 64 ? ~std::uint64_t(0)
                          : (std::uint64_t(1) << num_sets) - 1;
  }
};

bool letter_matches(const FormulaArena& a, const BuchiState& s, const Letter& l);

// Mask of letter-based sets the letter satisfies (bits shifted past the
// tableau sets).
std::uint64_t fairness_mask(const FormulaArena& a, const BuchiAutomaton& aut,
                            const Letter& l);

// Tableau translation. φ must be resolved and FlowSub-free; it is negated
// by the caller if needed. Internally: NNF, peel GF-shaped conjuncts into
// fairness sets, expand the remainder into a node graph.
BuchiAutomaton ltl_to_buchi(FormulaArena& a, FormulaId phi,
                            std::size_t max_nodes = 200000);

// Whether the automaton accepts the infinite word prefix·loop^ω.
bool buchi_accepts_lasso(const FormulaArena& a, const BuchiAutomaton& aut,
                         const Lasso& lasso);

}  // namespace transitmc
