#include "transitmc/statespace.hpp"

#include <unordered_map>

namespace transitmc {

StateGraph build_state_graph(const PetriNet& net, std::size_t max_states) {
  StateGraph g;
  std::unordered_map<Marking, std::uint32_t, MarkingHash> ids;
  // (predecessor state, transition) per state, for safeness error traces
  std::vector<std::pair<std::uint32_t, NodeId>> parent;

  auto trace_to = [&](std::uint32_t s) {
    std::vector<NodeId> rev;
    while (s != 0) {
      rev.push_back(parent[s].second);
      s = parent[s].first;
    }
    std::vector<std::string> out;
    for (auto it = rev.rbegin(); it != rev.rend(); ++it)
      out.push_back(net.transition_name(*it));
    return out;
  };

  Marking init = net.initial_marking();
  ids.emplace(init, 0);
  g.markings.push_back(init);
  parent.emplace_back(0, 0);

  for (std::uint32_t s = 0; s < g.markings.size(); ++s) {
    g.out.emplace_back();
    bool any = false;
    for (NodeId t = 0; t < net.num_transitions(); ++t) {
      if (!net.enabled(g.markings[s], t)) continue;
      any = true;
      Marking next;
      try {
        next = net.fire(g.markings[s], t);
      } catch (const SafenessError& e) {
        auto tr = trace_to(s);
        tr.push_back(net.transition_name(t));
        throw SafenessError(e.place, tr);
      }
      auto [it, fresh] = ids.emplace(next, std::uint32_t(g.markings.size()));
      if (fresh) {
        if (g.markings.size() >= max_states) throw BudgetError(max_states);
        g.markings.push_back(next);
        parent.emplace_back(s, t);
      }
      g.out[s].push_back(GraphEdge{t, it->second});
      ++g.num_edges;
    }
    if (!any) {
      g.out[s].push_back(GraphEdge{std::nullopt, s});
      ++g.num_edges;
    }
  }
  return g;
}

bool replay_lasso(const PetriNet& net, const Lasso& lasso, bool strict_stutter) {
  if (lasso.loop.empty()) return false;
  std::size_t total = lasso.size();
  for (std::size_t i = 0; i < total; ++i) {
    const Step& step = lasso.at(i);
    const Marking& expect_next = i + 1 < total
                                     ? lasso.at(i + 1).marking
                                     : lasso.loop.front().marking;
    if (step.fired) {
      if (!net.enabled(step.marking, *step.fired)) return false;
      Marking next = net.fire(step.marking, *step.fired);
      if (!(next == expect_next)) return false;
    } else {
      if (strict_stutter) {
        for (NodeId t = 0; t < net.num_transitions(); ++t)
          if (net.enabled(step.marking, t)) return false;
      }
      if (!(step.marking == expect_next)) return false;
    }
  }
  return true;
}

}  // namespace transitmc
