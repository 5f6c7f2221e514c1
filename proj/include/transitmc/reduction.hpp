#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "transitmc/ltl.hpp"
#include "transitmc/petri.hpp"

namespace transitmc {

// Output of the net transformation: the original net plus, per flow
// subformula i in 1..n, a tracking subnet (place init__sub<i> and a copy
// <p>__sub<i> of every place). Per original transition t there is one
// reduced transition t__c<k> for every combination of "which transit (or
// none) each subnet follows"; the NO_TRANSIT entry for subnet i guards t
// with inhibitor arcs on the copies of t's preset, so a subnet holding a
// chain on one of those places forces a chain-tracking copy of t instead.
struct ReducedProblem {
  PetriNet net;
  std::uint32_t n = 0;
  std::vector<NodeId> init_place;                 // [i-1] -> init__sub<i>
  std::vector<std::vector<NodeId>> subnet_place;  // [i-1][p] -> copy of p
  std::vector<NodeId> lambda;                     // reduced t -> original t
  std::vector<std::vector<NodeId>> preimage;      // original t -> reduced ts
  // touches[i-1][reduced t]: t has a flow arc on subnet i (its combination
  // entry for i is a transit or a chain creation). These are the T_i sets.
  std::vector<std::vector<char>> touches;
};

ReducedProblem reduce_net(const PetriNetWithTransits& pnwt, std::uint32_t n);

// Rewrites a Flow-LTL formula (resolved against the original net) into LTL
// over the reduced net. Run part: places kept, each transition replaced by
// the disjunction of its copies, A φ_i replaced by
// init__sub<i> W (¬init__sub<i> ∧ φ_i'). Flow part i: places become their
// subnet-i copies; a transition atom t becomes (∨ O_i) U (∨ M_i(t)) and ◯φ
// becomes ((∨ O_i) U ((∨ T_i) ∧ ◯φ')) ∨ (□¬(∨ T_i) ∧ φ'), so steps that do
// not move chain i are skipped. Disjunction subtrees over T_i/O_i are
// shared, keeping the output DAG linear in the input.
FormulaId reduce_formula(FormulaArena& a, const PetriNetWithTransits& pnwt,
                         FormulaId flow_ltl, const ReducedProblem& reduced);

struct WitnessChain {
  bool tracked = false;
  std::vector<NodeId> places;            // original place ids
  std::vector<NodeId> movers;            // original transitions, size()-1 of places
  std::optional<std::size_t> loop_start; // index into places where the lasso
                                         // loop re-enters; none = chain parks
};

struct MappedCounterexample {
  Lasso lasso;  // over the original net (fired transitions mapped through λ)
  std::vector<WitnessChain> chains;  // one per subnet
};

MappedCounterexample map_counterexample(const Lasso& reduced_lasso,
                                        const ReducedProblem& reduced,
                                        const PetriNetWithTransits& original);

// The collapsed trace of a witness chain (same convention as
// eval_flow_on_lasso), for confirming counterexamples against the oracle.
Lasso witness_chain_trace(const WitnessChain& chain, std::size_t num_places);

}  // namespace transitmc
