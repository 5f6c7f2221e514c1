#pragma once

#include <cstdint>
#include <optional>

#include "transitmc/ltl.hpp"
#include "transitmc/modelcheck.hpp"
#include "transitmc/petri.hpp"
#include "transitmc/reduction.hpp"

namespace transitmc {

struct PipelineResult {
  VerdictKind verdict;
  // VIOLATED only: a lasso over the original net plus one witness chain per
  // flow subformula. Confirmed by replay before being returned.
  std::optional<MappedCounterexample> counterexample;
  CheckStats stats;  // of the LTL check (reduced net for check_pnwt)
  std::uint32_t n = 0;
  std::size_t reduced_places = 0;
  std::size_t reduced_transitions = 0;
};

// Flow-LTL check over a safe PNWT: reduce the net (one tracking subnet per
// flow subformula), rewrite the formula, run the LTL checker, and map any
// counterexample back. `formula` must be resolved against `net`.
PipelineResult check_pnwt(FormulaArena& a, const PetriNetWithTransits& net,
                          FormulaId formula, std::size_t max_states);

// Plain LTL check on a safe net (no transits involved). Rejects formulas
// containing the flow operator.
PipelineResult check_ltl_direct(FormulaArena& a, const PetriNet& net,
                                FormulaId formula, std::size_t max_states);

}  // namespace transitmc
