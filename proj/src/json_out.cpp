#include "transitmc/json_out.hpp"

namespace transitmc {

using nlohmann::json;

json json_marking(const PetriNet& net, const Marking& m) {
  json arr = json::array();
  for (NodeId p = 0; p < net.num_places(); ++p)
    if (m.test(p)) arr.push_back(net.place_name(p));
  return arr;
}

namespace {

json json_steps(const PetriNet& net, const std::vector<Step>& steps) {
  json arr = json::array();
  for (const Step& s : steps) {
    json st;
    st["marking"] = json_marking(net, s.marking);
    st["fired"] = s.fired ? json(net.transition_name(*s.fired)) : json(nullptr);
    arr.push_back(std::move(st));
  }
  return arr;
}

}  // namespace

json json_lasso(const PetriNet& net, const Lasso& lasso) {
  json out;
  out["prefix"] = json_steps(net, lasso.prefix);
  out["loop"] = json_steps(net, lasso.loop);
  return out;
}

json json_chain(const PetriNet& net, const WitnessChain& chain,
                std::uint32_t index) {
  json out;
  out["subformula"] = index;
  out["tracked"] = chain.tracked;
  if (!chain.tracked) return out;
  json trace = json::array();
  for (std::size_t i = 0; i < chain.places.size(); ++i) {
    trace.push_back(net.place_name(chain.places[i]));
    if (i < chain.movers.size())
      trace.push_back(net.transition_name(chain.movers[i]));
  }
  out["trace"] = std::move(trace);
  out["loop_start"] =
      chain.loop_start ? json(*chain.loop_start) : json(nullptr);
  return out;
}

json json_result(const PetriNet& net, const PipelineResult& res) {
  json out;
  out["verdict"] = res.verdict == VerdictKind::Holds        ? "HOLDS"
                   : res.verdict == VerdictKind::Violated   ? "VIOLATED"
                                                            : "BOUNDED_HOLDS";
  json stats;
  stats["reachable_states"] = res.stats.reachable_states;
  stats["buchi_states"] = res.stats.buchi_states;
  stats["product_states"] = res.stats.product_states;
  if (res.n > 0 || res.reduced_places > 0) {
    stats["flow_subformulas"] = res.n;
    stats["reduced_places"] = res.reduced_places;
    stats["reduced_transitions"] = res.reduced_transitions;
  }
  out["stats"] = std::move(stats);
  if (res.counterexample) {
    json cex = json_lasso(net, res.counterexample->lasso);
    json chains = json::array();
    for (std::size_t i = 0; i < res.counterexample->chains.size(); ++i)
      chains.push_back(json_chain(net, res.counterexample->chains[i],
                                  static_cast<std::uint32_t>(i + 1)));
    cex["chains"] = std::move(chains);
    out["counterexample"] = std::move(cex);
  } else {
    out["counterexample"] = nullptr;
  }
  return out;
}

}  // namespace transitmc
