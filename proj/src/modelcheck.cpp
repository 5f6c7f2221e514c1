#include "transitmc/modelcheck.hpp"

#include <unordered_map>
#include <unordered_set>

namespace transitmc {

namespace {

// Degeneralization counter: value K means "all sets seen, just wrapped"
// (the accepting flag); it restarts from 0 on the next step.
std::uint8_t advance(std::uint8_t c, std::uint64_t mask, std::uint32_t K) {
  std::uint32_t cur = (c == K) ? 0 : c;
  while (cur < K && ((mask >> cur) & 1)) ++cur;
  return std::uint8_t(cur);
}

std::uint64_t pack(std::uint32_t g, std::uint32_t q, std::uint8_t c) {
  return (std::uint64_t(g) << 32) | (std::uint64_t(q) << 8) | c;
}

struct Succ {
  std::uint64_t key;
  std::uint32_t g, q;
  std::uint8_t c;
  std::optional<NodeId> fired;
};

struct Frame {
  std::uint64_t key;
  std::uint32_t g, q;
  std::uint8_t c;
  std::optional<NodeId> fired;  // edge that entered this frame
  std::vector<Succ> succs;
  std::size_t next = 0;
};

struct Search {
  const FormulaArena& a;
  const StateGraph& graph;
  const BuchiAutomaton& aut;
  std::uint32_t K;
  std::unordered_map<std::uint64_t, std::uint8_t> color;  // absent = white
  std::unordered_set<std::uint64_t> gq_seen;
  std::optional<Lasso> found;

  static constexpr std::uint8_t kCyan = 1, kBlue = 2, kRed = 3;

  std::uint8_t color_of(std::uint64_t key) const {
    auto it = color.find(key);
    return it == color.end() ? 0 : it->second;
  }

  bool accepting(std::uint8_t c) const { return c == K; }

  std::vector<Succ> successors(std::uint32_t g, std::uint32_t q,
                               std::uint8_t c) {
    std::vector<Succ> out;
    for (const GraphEdge& e : graph.out[g]) {
      Letter l{&graph.markings[g], e.fired};
      std::uint64_t mask =
          aut.states[q].acc_mask | fairness_mask(a, aut, l);
      std::uint8_t c2 = advance(c, mask, K);
      for (std::uint32_t q2 : aut.states[q].succ) {
        if (!letter_matches(a, aut.states[q2], l))
          continue;
        out.push_back(Succ{pack(e.target, q2, c2), e.target, q2, c2, e.fired});
      }
    }
    return out;
  }

  Step step_from(std::uint32_t src_g, std::optional<NodeId> fired) const {
    return Step{graph.markings[src_g], fired};
  }

  // blue = path root..top of `blue`; the closing edge goes from blue.back()
  // to the cyan state `w_key`; red_path (possibly empty) is an excursion
  // taken between blue.back() and the closing edge.
  void report(const std::vector<Frame>& blue, const std::vector<Frame>& red,
              std::uint64_t w_key, std::optional<NodeId> closing_fired) {
    std::size_t j = 0;
    for (std::size_t i = 0; i < blue.size(); ++i)
      if (blue[i].key == w_key) j = i;
    Lasso lasso;
    for (std::size_t i = 1; i <= j; ++i)
      lasso.prefix.push_back(step_from(blue[i - 1].g, blue[i].fired));
    for (std::size_t i = j + 1; i < blue.size(); ++i)
      lasso.loop.push_back(step_from(blue[i - 1].g, blue[i].fired));
    for (std::size_t i = 1; i < red.size(); ++i)
      lasso.loop.push_back(step_from(red[i - 1].g, red[i].fired));
    std::uint32_t last_g = red.empty() ? blue.back().g : red.back().g;
    lasso.loop.push_back(step_from(last_g, closing_fired));
    found = lasso;
  }

  void dfs_red(const std::vector<Frame>& blue) {
    const Frame& seed = blue.back();
    std::vector<Frame> stack;
    stack.push_back(Frame{seed.key, seed.g, seed.q, seed.c, std::nullopt,
                          successors(seed.g, seed.q, seed.c), 0});
    while (!stack.empty() && !found) {
      Frame& fr = stack.back();
      if (fr.next >= fr.succs.size()) {
        stack.pop_back();
        continue;
      }
      const Succ s = fr.succs[fr.next++];
      std::uint8_t col = color_of(s.key);
      if (col == kCyan) {
        report(blue, stack, s.key, s.fired);
        return;
      }
      if (col == kBlue) {
        color[s.key] = kRed;
        stack.push_back(
            Frame{s.key, s.g, s.q, s.c, s.fired, successors(s.g, s.q, s.c), 0});
      }
    }
  }

  void dfs_blue(std::uint32_t g0, std::uint32_t q0, std::uint8_t c0) {
    std::vector<Frame> stack;
    std::uint64_t k0 = pack(g0, q0, c0);
    color[k0] = kCyan;
    gq_seen.insert(pack(g0, q0, 0));
    stack.push_back(Frame{k0, g0, q0, c0, std::nullopt,
                          successors(g0, q0, c0), 0});
    while (!stack.empty() && !found) {
      Frame& fr = stack.back();
      if (fr.next >= fr.succs.size()) {
        if (accepting(fr.c)) {
          dfs_red(stack);
          if (found) return;
        }
        color[fr.key] = kBlue;
        stack.pop_back();
        continue;
      }
      const Succ s = fr.succs[fr.next++];
      std::uint8_t col = color_of(s.key);
      if (col == kCyan && (accepting(fr.c) || accepting(s.c))) {
        report(stack, {}, s.key, s.fired);
        return;
      }
      if (col == 0) {
        color[s.key] = kCyan;
        gq_seen.insert(pack(s.g, s.q, 0));
        stack.push_back(
            Frame{s.key, s.g, s.q, s.c, s.fired, successors(s.g, s.q, s.c), 0});
      }
    }
  }
};

}  // namespace

Verdict model_check_graph(FormulaArena& a, const StateGraph& graph,
                          FormulaId phi) {
  BuchiAutomaton aut = ltl_to_buchi(a, a.f_not(phi));

  Search search{a, graph, aut, aut.num_sets, {}, {}, std::nullopt};
  std::uint8_t c0 = 0;  // with zero sets the counter starts wrapped
  search.dfs_blue(0, 0, c0);

  Verdict v;
  v.stats.reachable_states = graph.num_states();
  v.stats.buchi_states = aut.states.size();
  v.stats.product_states = search.gq_seen.size();
  if (search.found) {
    v.kind = VerdictKind::Violated;
    v.counterexample = std::move(search.found);
  } else {
    v.kind = VerdictKind::Holds;
  }
  return v;
}

Verdict model_check(FormulaArena& a, const PetriNet& net, FormulaId phi,
                    std::size_t max_states) {
  StateGraph graph = build_state_graph(net, max_states);
  return model_check_graph(a, graph, phi);
}

}  // namespace transitmc
