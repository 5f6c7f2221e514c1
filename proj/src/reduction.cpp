#include "transitmc/reduction.hpp"

#include <algorithm>
#include <unordered_map>

namespace transitmc {

namespace {

std::vector<std::uint64_t> combination_counts(const PetriNetWithTransits& net,
                                              std::uint32_t n) {
  std::vector<std::uint64_t> counts(net.num_transitions(), 1);
  for (NodeId t = 0; t < net.num_transitions(); ++t) {
    std::uint64_t base = net.transits(t).size() + 1;
    std::uint64_t total = 1;
    for (std::uint32_t i = 0; i < n; ++i) {
      total *= base;
      if (total > 1000000)
        throw NetError("reduction would create more than 1000000 copies of '" +
                       net.transition_name(t) + "'");
    }
    counts[t] = total;
  }
  return counts;
}

}  // namespace

ReducedProblem reduce_net(const PetriNetWithTransits& pnwt, std::uint32_t n) {
  ReducedProblem out;
  out.n = n;

  auto fresh_place = [&](const std::string& name) {
    if (pnwt.find_place(name) || pnwt.find_transition(name))
      throw NetError("generated id '" + name + "' collides with the input net");
    return out.net.add_place(name);
  };

  out.net.name = pnwt.name;
  for (NodeId p = 0; p < pnwt.num_places(); ++p)
    out.net.add_place(pnwt.place_name(p), pnwt.initially_marked(p));
  for (std::uint32_t i = 1; i <= n; ++i) {
    NodeId init = fresh_place("init__sub" + std::to_string(i));
    out.net.mark_initially(init);
    out.init_place.push_back(init);
    std::vector<NodeId> copies;
    for (NodeId p = 0; p < pnwt.num_places(); ++p)
      copies.push_back(
          fresh_place(pnwt.place_name(p) + "__sub" + std::to_string(i)));
    out.subnet_place.push_back(std::move(copies));
  }

  out.preimage.resize(pnwt.num_transitions());
  out.touches.assign(n, {});

  auto counts = combination_counts(pnwt, n);
  for (NodeId t = 0; t < pnwt.num_transitions(); ++t) {
    const auto& td = pnwt.transition(t);
    const auto& transits = pnwt.transits(t);
    const std::uint64_t base = transits.size() + 1;

    for (std::uint64_t k = 0; k < counts[t]; ++k) {
      std::string name = td.name + "__c" + std::to_string(k);
      if (pnwt.find_place(name) || pnwt.find_transition(name))
        throw NetError("generated id '" + name +
                       "' collides with the input net");
      NodeId tc = out.net.add_transition(name);
      out.lambda.push_back(t);
      out.preimage[t].push_back(tc);
      for (std::uint32_t i = 0; i < n; ++i) out.touches[i].push_back(0);

      for (NodeId p : td.preset) out.net.add_arc_pt(p, tc);
      for (NodeId p : td.postset) out.net.add_arc_tp(tc, p);

      // digit for subnet 1 is the most significant
      std::uint64_t rem = k;
      for (std::uint32_t i = n; i >= 1; --i) {
        std::uint64_t digit = rem % base;
        rem /= base;
        const auto& copies = out.subnet_place[i - 1];
        if (digit < transits.size()) {
          const Transit& tr = transits[digit];
          if (tr.source) {
            out.net.add_arc_pt(copies[*tr.source], tc);
          } else {
            out.net.add_arc_pt(out.init_place[i - 1], tc);
          }
          out.net.add_arc_tp(tc, copies[tr.target]);
          out.touches[i - 1][tc] = 1;
        } else {
          for (NodeId p : td.preset) out.net.add_inhibitor(copies[p], tc);
        }
      }
    }
  }
  return out;
}

namespace {

struct Substituter {
  FormulaArena& a;
  const ReducedProblem& red;

  // per-subnet shared disjunctions
  std::vector<FormulaId> or_T, or_O, not_or_T_always;
  std::vector<std::unordered_map<FormulaId, FormulaId>> flow_memo;
  std::unordered_map<FormulaId, FormulaId> run_memo;

  Substituter(FormulaArena& a, const ReducedProblem& red) : a(a), red(red) {
    for (std::uint32_t i = 0; i < red.n; ++i) {
      std::vector<FormulaId> ts, os;
      for (NodeId tc = 0; tc < red.net.num_transitions(); ++tc) {
        FormulaId atom = a.transition_atom(red.net, tc);
        if (red.touches[i][tc])
          ts.push_back(atom);
        else
          os.push_back(atom);
      }
      or_T.push_back(a.or_all(ts));
      or_O.push_back(a.or_all(os));
      not_or_T_always.push_back(a.f_always(a.f_not(or_T.back())));
    }
    flow_memo.resize(red.n);
  }

  FormulaId flow_transition_atom(std::uint32_t i, NodeId t) {
    std::vector<FormulaId> ms;
    for (NodeId tc : red.preimage[t])
      if (red.touches[i][tc]) ms.push_back(a.transition_atom(red.net, tc));
    return a.f_until(or_O[i], a.or_all(ms));
  }

  FormulaId subst_flow(std::uint32_t i, FormulaId f) {
    auto it = flow_memo[i].find(f);
    if (it != flow_memo[i].end()) return it->second;
    const FNode n = a.node(f);
    FormulaId out;
    switch (n.kind) {
      case FKind::True:
      case FKind::False:
        out = f;
        break;
      case FKind::Atom:
        if (n.atom_kind == AtomKind::Place) {
          out = a.place_atom(red.net, red.subnet_place[i][n.atom_node]);
        } else if (n.atom_kind == AtomKind::Transition) {
          out = flow_transition_atom(i, n.atom_node);
        } else {
          throw NetError("unresolved atom '" + a.atom_name(n) + "'");
        }
        break;
      case FKind::Next: {
        FormulaId inner = subst_flow(i, n.lhs);
        out = a.f_or(
            a.f_until(or_O[i], a.f_and(or_T[i], a.f_next(inner))),
            a.f_and(not_or_T_always[i], inner));
        break;
      }
      case FKind::FlowSub:
        throw NetError("nested A operator is not allowed");
      default: {
        FormulaId l = n.lhs == kNoFormula ? kNoFormula : subst_flow(i, n.lhs);
        FormulaId r = n.rhs == kNoFormula ? kNoFormula : subst_flow(i, n.rhs);
        out = rebuild(n.kind, l, r);
        break;
      }
    }
    flow_memo[i].emplace(f, out);
    return out;
  }

  FormulaId subst_run(FormulaId f) {
    auto it = run_memo.find(f);
    if (it != run_memo.end()) return it->second;
    const FNode n = a.node(f);
    FormulaId out;
    switch (n.kind) {
      case FKind::True:
      case FKind::False:
        out = f;
        break;
      case FKind::Atom:
        if (n.atom_kind == AtomKind::Place) {
          out = a.place_atom(red.net, n.atom_node);
        } else if (n.atom_kind == AtomKind::Transition) {
          std::vector<FormulaId> ds;
          for (NodeId tc : red.preimage[n.atom_node])
            ds.push_back(a.transition_atom(red.net, tc));
          out = a.or_all(ds);
        } else {
          throw NetError("unresolved atom '" + a.atom_name(n) + "'");
        }
        break;
      case FKind::FlowSub: {
        std::uint32_t i = n.aux - 1;
        FormulaId init = a.place_atom(red.net, red.init_place[i]);
        FormulaId body = subst_flow(i, n.lhs);
        out = a.f_wuntil(init, a.f_and(a.f_not(init), body));
        break;
      }
      default: {
        FormulaId l = n.lhs == kNoFormula ? kNoFormula : subst_run(n.lhs);
        FormulaId r = n.rhs == kNoFormula ? kNoFormula : subst_run(n.rhs);
        out = rebuild(n.kind, l, r);
        break;
      }
    }
    run_memo.emplace(f, out);
    return out;
  }

  FormulaId rebuild(FKind kind, FormulaId l, FormulaId r) {
    switch (kind) {
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
      default: throw NetError("unexpected operator");
    }
  }
};

}  // namespace

FormulaId reduce_formula(FormulaArena& a, const PetriNetWithTransits& pnwt,
                         FormulaId flow_ltl, const ReducedProblem& reduced) {
  if (reduced.n > 0 && reduced.subnet_place[0].size() != pnwt.num_places())
    throw NetError("reduction does not belong to this net");
  auto bodies = flow_subformulas(a, flow_ltl);
  if (bodies.size() != reduced.n)
    throw NetError("flow subformula count " + std::to_string(bodies.size()) +
                   " does not match the reduction (n = " +
                   std::to_string(reduced.n) + ")");
  Substituter s(a, reduced);
  return s.subst_run(flow_ltl);
}

MappedCounterexample map_counterexample(const Lasso& reduced_lasso,
                                        const ReducedProblem& reduced,
                                        const PetriNetWithTransits& original) {
  const std::size_t P = reduced_lasso.prefix.size();
  const std::size_t L = reduced_lasso.loop.size();
  const std::size_t total = P + L;
  const std::size_t np = original.num_places();

  MappedCounterexample out;
  auto project = [&](const Step& s) {
    Marking m(np);
    for (NodeId p = 0; p < np; ++p)
      if (s.marking.test(p)) m.set(p);
    std::optional<NodeId> fired;
    if (s.fired) fired = reduced.lambda[*s.fired];
    return Step{std::move(m), fired};
  };
  for (const Step& s : reduced_lasso.prefix) out.lasso.prefix.push_back(project(s));
  for (const Step& s : reduced_lasso.loop) out.lasso.loop.push_back(project(s));

  for (std::uint32_t i = 0; i < reduced.n; ++i) {
    WitnessChain chain;
    // reverse lookup: reduced copy place -> original place
    std::unordered_map<NodeId, NodeId> back;
    for (NodeId p = 0; p < np; ++p) back[reduced.subnet_place[i][p]] = p;

    auto tracked_at = [&](std::size_t pos) -> std::optional<NodeId> {
      const Step& s = reduced_lasso.at(pos);
      for (const auto& [copy, orig] : back)
        if (s.marking.test(copy)) return orig;
      return std::nullopt;
    };

    std::size_t start = total;
    for (std::size_t j = 0; j < total; ++j) {
      if (tracked_at(j)) {
        start = j;
        break;
      }
    }
    if (start == total) {
      out.chains.push_back(std::move(chain));
      continue;
    }

    chain.tracked = true;
    chain.places.push_back(*tracked_at(start));
    for (std::size_t j = start; j < total; ++j) {
      const Step& s = reduced_lasso.at(j);
      if (!s.fired || !reduced.touches[i][*s.fired]) continue;
      std::size_t nxt = j + 1 < total ? j + 1 : P;
      chain.movers.push_back(reduced.lambda[*s.fired]);
      chain.places.push_back(*tracked_at(nxt));
    }
    // chain index when the run enters its loop
    std::size_t moves_in_prefix = 0;
    for (std::size_t j = start; j < P; ++j) {
      const Step& s = reduced_lasso.at(j);
      if (s.fired && reduced.touches[i][*s.fired]) ++moves_in_prefix;
    }
    if (chain.movers.size() > moves_in_prefix)
      chain.loop_start = moves_in_prefix;
    out.chains.push_back(std::move(chain));
  }
  return out;
}

Lasso witness_chain_trace(const WitnessChain& chain, std::size_t num_places) {
  Lasso trace;
  if (!chain.tracked) throw NetError("witness chain was never tracked");
  auto step_at = [&](std::size_t k, std::optional<NodeId> mover) {
    Marking m(num_places);
    m.set(chain.places[k]);
    return Step{std::move(m), mover};
  };
  if (!chain.loop_start) {
    // finite chain: every move is a prefix step, then a stutter on the last place
    for (std::size_t k = 0; k + 1 < chain.places.size(); ++k)
      trace.prefix.push_back(step_at(k, chain.movers[k]));
    trace.loop.push_back(step_at(chain.places.size() - 1, std::nullopt));
    return trace;
  }
  std::size_t ls = *chain.loop_start;
  for (std::size_t k = 0; k < ls; ++k)
    trace.prefix.push_back(step_at(k, chain.movers[k]));
  for (std::size_t k = ls; k < chain.movers.size(); ++k)
    trace.loop.push_back(step_at(k, chain.movers[k]));
  return trace;
}

}  // namespace transitmc
