#include "transitmc/oracle.hpp"

#include <algorithm>
#include <unordered_map>

#include "transitmc/statespace.hpp"

namespace transitmc {

namespace {

struct LassoEval {
  const FormulaArena& a;
  const Lasso& lasso;
  std::size_t P, L, total;
  std::unordered_map<FormulaId, std::uint32_t> sub_index;
  std::vector<std::int8_t> memo;  // sub * total + pos; -1 unknown

  LassoEval(const FormulaArena& a, const Lasso& lasso)
      : a(a), lasso(lasso), P(lasso.prefix.size()), L(lasso.loop.size()),
        total(P + L) {}

  std::size_t succ(std::size_t i) const { return i + 1 < total ? i + 1 : P; }

  std::uint32_t index_of(FormulaId f) {
    auto it = sub_index.find(f);
    if (it != sub_index.end()) return it->second;
    std::uint32_t idx = std::uint32_t(sub_index.size());
    sub_index.emplace(f, idx);
    memo.resize(sub_index.size() * total, -1);
    return idx;
  }

  bool atom(const FNode& n, std::size_t i) const {
    const Step& s = lasso.at(i);
    if (n.atom_kind == AtomKind::Place) return s.marking.test(n.atom_node);
    if (n.atom_kind == AtomKind::Transition)
      return s.fired && *s.fired == n.atom_node;
    throw NetError("unresolved atom '" + a.atom_name(n) + "'");
  }

  bool eval(FormulaId f, std::size_t i) {
    std::uint32_t si = index_of(f);
    std::int8_t cached = memo[std::size_t(si) * total + i];
    if (cached != -1) return cached == 1;

    const FNode& n = a.node(f);
    bool r;
    switch (n.kind) {
      case FKind::True: r = true; break;
      case FKind::False: r = false; break;
      case FKind::Atom: r = atom(n, i); break;
      case FKind::Not: r = !eval(n.lhs, i); break;
      case FKind::And: r = eval(n.lhs, i) && eval(n.rhs, i); break;
      case FKind::Or: r = eval(n.lhs, i) || eval(n.rhs, i); break;
      case FKind::Imp: r = !eval(n.lhs, i) || eval(n.rhs, i); break;
      case FKind::Next: r = eval(n.lhs, succ(i)); break;
      case FKind::Until: r = walk(n, i, WalkKind::Until); break;
      case FKind::WeakUntil: r = walk(n, i, WalkKind::WeakUntil); break;
      case FKind::Release: r = walk(n, i, WalkKind::Release); break;
      case FKind::Always: r = walk(n, i, WalkKind::Always); break;
      case FKind::Eventually: r = walk(n, i, WalkKind::Eventually); break;
      case FKind::FlowSub:
        throw NetError("flow operator reached the plain-LTL evaluator");
      default: r = false; break;
    }
    // the memo vector may have been resized by recursive index_of calls
    memo[std::size_t(si) * total + i] = r ? 1 : 0;
    return r;
  }

  enum class WalkKind { Until, WeakUntil, Release, Always, Eventually };

  bool walk(const FNode& n, std::size_t start, WalkKind kind) {
    std::vector<bool> visited(total, false);
    std::size_t j = start;
    while (!visited[j]) {
      visited[j] = true;
      switch (kind) {
        case WalkKind::Until:
        case WalkKind::WeakUntil:
          if (eval(n.rhs, j)) return true;
          if (!eval(n.lhs, j)) return false;
          break;
        case WalkKind::Release:
          if (!eval(n.rhs, j)) return false;
          if (eval(n.lhs, j)) return true;
          break;
        case WalkKind::Always:
          if (!eval(n.lhs, j)) return false;
          break;
        case WalkKind::Eventually:
          if (eval(n.lhs, j)) return true;
          break;
      }
      j = succ(j);
    }
    // cycled through the loop without resolution
    return kind == WalkKind::WeakUntil || kind == WalkKind::Release ||
           kind == WalkKind::Always;
  }
};

}  // namespace

bool eval_ltl_on_lasso(const FormulaArena& a, FormulaId f, const Lasso& lasso) {
  if (lasso.loop.empty()) throw NetError("lasso loop is empty");
  LassoEval ev(a, lasso);
  return ev.eval(f, 0);
}

namespace {

// One letter of a chain trace.
struct ChainLetter {
  NodeId place;
  std::optional<NodeId> mover;
};

Lasso chain_trace_to_lasso(std::size_t num_places,
                           const std::vector<ChainLetter>& prefix,
                           const std::vector<ChainLetter>& loop) {
  auto to_step = [&](const ChainLetter& cl) {
    Marking m(num_places);
    m.set(cl.place);
    return Step{m, cl.mover};
  };
  Lasso out;
  for (const auto& cl : prefix) out.prefix.push_back(to_step(cl));
  for (const auto& cl : loop) out.loop.push_back(to_step(cl));
  return out;
}

struct ChainEnum {
  const FormulaArena& a;
  const PetriNetWithTransits& net;
  const Lasso& lasso;
  FormulaId body;
  std::size_t budget;
  std::size_t P, L, total;
  std::size_t chains_seen = 0;
  bool all_ok = true;

  std::size_t norm_succ(std::size_t i) const {
    return i + 1 < total ? i + 1 : P;
  }

  // letters emitted so far along the DFS path + the (pos, place) states
  struct PathEntry {
    std::size_t pos;
    NodeId place;
    std::size_t letters_before;  // emitted letters when this state was entered
  };
  std::vector<PathEntry> path{};
  std::vector<ChainLetter> letters{};

  bool check_trace(const std::vector<ChainLetter>& prefix,
                   const std::vector<ChainLetter>& loop) {
    if (++chains_seen > budget) throw BudgetError(budget);
    Lasso trace = chain_trace_to_lasso(net.num_places(), prefix, loop);
    return eval_ltl_on_lasso(a, body, trace);
  }

  // finite trace: everything emitted so far, stuttering on `last`
  bool check_finite(NodeId last) {
    std::vector<ChainLetter> loop{{last, std::nullopt}};
    return check_trace(letters, loop);
  }

  void explore(std::size_t pos, NodeId place) {
    if (!all_ok) return;
    for (const auto& pe : path) {
      if (pe.pos == pos && pe.place == place) {
        // lasso closure at the first repeat of (position, place)
        std::vector<ChainLetter> pre(letters.begin(),
                                     letters.begin() + pe.letters_before);
        std::vector<ChainLetter> loop(letters.begin() + pe.letters_before,
                                      letters.end());
        if (loop.empty()) {
          // the chain parked through a full loop of the run
          if (!check_finite(place)) all_ok = false;
        } else {
          if (!check_trace(pre, loop)) all_ok = false;
        }
        return;
      }
    }
    path.push_back({pos, place, letters.size()});

    const Step& step = lasso.at(pos);
    if (!step.fired) {
      // stutter step: the chain cannot move
      explore(norm_succ(pos), place);
    } else {
      NodeId t = *step.fired;
      const auto& td = net.transition(t);
      bool consumed =
          std::binary_search(td.preset.begin(), td.preset.end(), place);
      if (!consumed) {
        explore(norm_succ(pos), place);
      } else {
        bool moved = false;
        for (const Transit& tr : net.transits(t)) {
          if (!tr.source || *tr.source != place) continue;
          moved = true;
          letters.push_back({place, t});
          explore(norm_succ(pos), tr.target);
          letters.pop_back();
          if (!all_ok) break;
        }
        if (!moved) {
          // chain killed: finite trace stuttering on its last place
          if (!check_finite(place)) all_ok = false;
        }
      }
    }
    path.pop_back();
  }
};

}  // namespace

bool eval_flow_on_lasso(const FormulaArena& a, const PetriNetWithTransits& net,
                        const Lasso& lasso, FormulaId body,
                        std::size_t chain_budget) {
  if (lasso.loop.empty()) throw NetError("lasso loop is empty");
  ChainEnum en{a, net, lasso, body, chain_budget,
               lasso.prefix.size(), lasso.loop.size(), lasso.size()};
  for (std::size_t j = 0; j < en.total && en.all_ok; ++j) {
    const Step& step = lasso.at(j);
    if (!step.fired) continue;
    for (const Transit& tr : net.transits(*step.fired)) {
      if (tr.source) continue;
      en.path.clear();
      en.letters.clear();
      en.explore(en.norm_succ(j), tr.target);
      if (!en.all_ok) break;
    }
  }
  return en.all_ok;
}

namespace {

FormulaId substitute_flowsubs(FormulaArena& a, FormulaId f,
                              const std::vector<bool>& values) {
  const FNode n = a.node(f);
  switch (n.kind) {
    case FKind::FlowSub:
      return values[n.aux - 1] ? a.tru() : a.fls();
    case FKind::True:
    case FKind::False:
    case FKind::Atom:
      return f;
    default: {
      FormulaId l = n.lhs == kNoFormula ? kNoFormula
                                        : substitute_flowsubs(a, n.lhs, values);
      FormulaId r = n.rhs == kNoFormula ? kNoFormula
                                        : substitute_flowsubs(a, n.rhs, values);
      if (l == n.lhs && r == n.rhs) return f;
      switch (n.kind) {
        case FKind::Not: return a.f_not(l);
        case FKind::And: return a.f_and(l, r);
        case FKind::Or: return a.f_or(l, r);
        case FKind::Imp: return a.f_imp(l, r);
        case FKind::Next: return a.f_next(l);
        case FKind::Until: return a.f_until(l, r);
        case FKind::WeakUntil: return a.f_wuntil(l, r);
        case FKind::Release: return a.f_release(l, r);
        case FKind::Always: return a.f_always(l);
        case FKind::Eventually: return a.f_eventually(l);
        default: return f;
      }
    }
  }
}

struct BruteForce {
  FormulaArena& a;
  const PetriNetWithTransits& net;
  const StateGraph& graph;
  FormulaId formula;
  std::vector<FormulaId> flow_bodies;
  std::size_t bound;
  std::size_t max_lassos;
  std::size_t lassos_seen = 0;
  std::optional<Lasso> violation{};

  std::vector<std::uint32_t> path_states{};
  std::vector<GraphEdge> path_edges{};

  Lasso build_lasso(std::size_t close_at) const {
    Lasso out;
    for (std::size_t i = 0; i < path_edges.size(); ++i) {
      Step s{graph.markings[path_states[i]], path_edges[i].fired};
      if (i < close_at)
        out.prefix.push_back(std::move(s));
      else
        out.loop.push_back(std::move(s));
    }
    return out;
  }

  bool lasso_satisfies(const Lasso& lasso) {
    std::vector<bool> values;
    for (FormulaId body : flow_bodies)
      values.push_back(eval_flow_on_lasso(a, net, lasso, body));
    FormulaId ltl = substitute_flowsubs(a, formula, values);
    return eval_ltl_on_lasso(a, ltl, lasso);
  }

  void dfs(std::uint32_t state) {
    if (violation) return;
    // close a lasso at every earlier occurrence of this state
    for (std::size_t j = 0; j + 1 < path_states.size(); ++j) {
      if (path_states[j] != state) continue;
      if (++lassos_seen > max_lassos) throw BudgetError(max_lassos);
      Lasso cand = build_lasso(j);
      if (!lasso_satisfies(cand)) {
        violation = std::move(cand);
        return;
      }
    }
    if (path_edges.size() >= bound) return;
    for (const GraphEdge& e : graph.out[state]) {
      path_edges.push_back(e);
      path_states.push_back(e.target);
      dfs(e.target);
      path_states.pop_back();
      path_edges.pop_back();
      if (violation) return;
    }
  }
};

}  // namespace

Verdict brute_force_check(FormulaArena& a, const PetriNetWithTransits& net,
                          FormulaId flow_ltl, std::size_t bound,
                          std::size_t max_states, std::size_t max_lassos) {
  StateGraph graph = build_state_graph(net, max_states);
  BruteForce bf{a,     net,        graph, flow_ltl, flow_subformulas(a, flow_ltl),
                bound, max_lassos};
  bf.path_states.push_back(0);
  bf.dfs(0);

  Verdict v;
  v.stats.reachable_states = graph.num_states();
  if (bf.violation) {
    v.kind = VerdictKind::Violated;
    v.counterexample = std::move(bf.violation);
  } else {
    v.kind = VerdictKind::BoundedHolds;
  }
  return v;
}

}  // namespace transitmc
