#include "transitmc/pipeline.hpp"

#include "transitmc/statespace.hpp"

namespace transitmc {

PipelineResult check_pnwt(FormulaArena& a, const PetriNetWithTransits& net,
                          FormulaId formula, std::size_t max_states) {
  PipelineResult res;
  res.n = static_cast<std::uint32_t>(flow_subformulas(a, formula).size());

  ReducedProblem reduced = reduce_net(net, res.n);
  res.reduced_places = reduced.net.num_places();
  res.reduced_transitions = reduced.net.num_transitions();
  FormulaId ltl = reduce_formula(a, net, formula, reduced);

  Verdict v = model_check(a, reduced.net, ltl, max_states);
  res.verdict = v.kind;
  res.stats = v.stats;
  if (v.kind == VerdictKind::Violated) {
    MappedCounterexample mapped =
        map_counterexample(*v.counterexample, reduced, net);
    // Mapped lassos may stutter while only the tracking side of the reduced
    // net progressed, so the replay allows stutters at non-deadlocks.
    if (!replay_lasso(net, mapped.lasso, /*strict_stutter=*/false))
      throw NetError("internal error: counterexample does not replay");
    res.counterexample = std::move(mapped);
  }
  return res;
}

PipelineResult check_ltl_direct(FormulaArena& a, const PetriNet& net,
                                FormulaId formula, std::size_t max_states) {
  if (contains_flowsub(a, formula))
    throw ParseError("the flow operator needs a net with transits; "
                     "use check-pnwt");
  PipelineResult res;
  Verdict v = model_check(a, net, formula, max_states);
  res.verdict = v.kind;
  res.stats = v.stats;
  if (v.kind == VerdictKind::Violated) {
    if (!replay_lasso(net, *v.counterexample, /*strict_stutter=*/true))
      throw NetError("internal error: counterexample does not replay");
    res.counterexample = MappedCounterexample{std::move(*v.counterexample), {}};
  }
  return res;
}

}  // namespace transitmc
