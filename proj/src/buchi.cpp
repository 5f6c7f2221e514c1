#include "transitmc/buchi.hpp"

#include <algorithm>

namespace transitmc {

bool eval_prop_letter(const FormulaArena& a, FormulaId f, const Letter& l) {
  const FNode& n = a.node(f);
  switch (n.kind) {
    case FKind::True:
      return true;
    case FKind::False:
      return false;
    case FKind::Atom:
      if (n.atom_kind == AtomKind::Place) return l.marking->test(n.atom_node);
      if (n.atom_kind == AtomKind::Transition)
        return l.fired && *l.fired == n.atom_node;
      throw NetError("unresolved atom '" + a.atom_name(n) + "'");
    case FKind::Not:
      return !eval_prop_letter(a, n.lhs, l);
    case FKind::And:
      return eval_prop_letter(a, n.lhs, l) && eval_prop_letter(a, n.rhs, l);
    case FKind::Or:
      return eval_prop_letter(a, n.lhs, l) || eval_prop_letter(a, n.rhs, l);
    case FKind::Imp:
      return !eval_prop_letter(a, n.lhs, l) || eval_prop_letter(a, n.rhs, l);
    default:
      throw NetError("temporal operator in a propositional context");
  }
}

bool letter_matches(const FormulaArena& a, const BuchiState& s, const Letter& l) {
  for (FormulaId f : s.pos_lits) {
    const FNode& n = a.node(f);
    bool v = n.atom_kind == AtomKind::Place
                 ? l.marking->test(n.atom_node)
                 : (l.fired && *l.fired == n.atom_node);
    if (!v) return false;
  }
  for (FormulaId f : s.neg_lits) {
    const FNode& n = a.node(f);
    bool v = n.atom_kind == AtomKind::Place
                 ? l.marking->test(n.atom_node)
                 : (l.fired && *l.fired == n.atom_node);
    if (v) return false;
  }
  return true;
}

std::uint64_t fairness_mask(const FormulaArena& a, const BuchiAutomaton& aut,
                            const Letter& l) {
  std::uint64_t mask = 0;
  for (std::size_t k = 0; k < aut.fairness_props.size(); ++k) {
    if (eval_prop_letter(a, aut.fairness_props[k], l))
      mask |= std::uint64_t(1) << (aut.num_tableau_sets + k);
  }
  return mask;
}

namespace {

bool is_propositional(const FormulaArena& a, FormulaId f) {
  bool prop = true;
  std::vector<FormulaId> stack{f};
  std::vector<bool> seen(a.num_nodes(), false);
  while (!stack.empty()) {
    FormulaId x = stack.back();
    stack.pop_back();
    if (seen[x]) continue;
    seen[x] = true;
    const FNode& n = a.node(x);
    switch (n.kind) {
      case FKind::Next:
      case FKind::Until:
      case FKind::WeakUntil:
      case FKind::Release:
      case FKind::Always:
      case FKind::Eventually:
      case FKind::FlowSub:
        prop = false;
        break;
      default:
        if (n.lhs != kNoFormula) stack.push_back(n.lhs);
        if (n.rhs != kNoFormula) stack.push_back(n.rhs);
    }
  }
  return prop;
}

// Matches GF(prop) in NNF form: Release(False, Until(True, prop)).
bool match_gf(const FormulaArena& a, FormulaId f, FormulaId& prop) {
  const FNode& n = a.node(f);
  if (n.kind != FKind::Release || a.node(n.lhs).kind != FKind::False)
    return false;
  const FNode& u = a.node(n.rhs);
  if (u.kind != FKind::Until || a.node(u.lhs).kind != FKind::True) return false;
  if (!is_propositional(a, u.rhs)) return false;
  prop = u.rhs;
  return true;
}

// A conjunct peels when it is a disjunction tree whose leaves are all
// GF(prop): GF p ∨ GF q ≡ GF(p ∨ q) over infinite words.
bool match_gf_disjunction(FormulaArena& a, FormulaId f, FormulaId& prop) {
  std::vector<FormulaId> leaves;
  std::vector<FormulaId> stack{f};
  while (!stack.empty()) {
    FormulaId x = stack.back();
    stack.pop_back();
    const FNode& n = a.node(x);
    if (n.kind == FKind::Or) {
      stack.push_back(n.rhs);
      stack.push_back(n.lhs);
    } else {
      leaves.push_back(x);
    }
  }
  std::vector<FormulaId> props;
  for (FormulaId leaf : leaves) {
    FormulaId p;
    if (!match_gf(a, leaf, p)) return false;
    props.push_back(p);
  }
  prop = a.or_all(props);
  return true;
}

void collect_conjuncts(const FormulaArena& a, FormulaId f,
                       std::vector<FormulaId>& out) {
  const FNode& n = a.node(f);
  if (n.kind == FKind::And) {
    collect_conjuncts(a, n.lhs, out);
    collect_conjuncts(a, n.rhs, out);
  } else {
    out.push_back(f);
  }
}

struct SortedSet {
  std::vector<FormulaId> v;  // ascending, unique

  bool contains(FormulaId x) const {
    return std::binary_search(v.begin(), v.end(), x);
  }
  // returns false if already present
  bool insert(FormulaId x) {
    auto it = std::lower_bound(v.begin(), v.end(), x);
    if (it != v.end() && *it == x) return false;
    v.insert(it, x);
    return true;
  }
  void erase_front() { v.erase(v.begin()); }
  bool operator==(const SortedSet& o) const { return v == o.v; }
};

struct TNode {
  std::vector<std::uint32_t> incoming;  // kInit or node indices, ascending
  SortedSet news, old, next;
};

constexpr std::uint32_t kInit = 0xFFFFFFFFu;

struct Tableau {
  FormulaArena& a;
  std::size_t max_nodes;
  std::vector<TNode> done;  // fully expanded nodes

  void add_incoming(TNode& nd, std::uint32_t from) {
    auto it = std::lower_bound(nd.incoming.begin(), nd.incoming.end(), from);
    if (it == nd.incoming.end() || *it != from) nd.incoming.insert(it, from);
  }

  void expand(TNode node) {
    if (node.news.v.empty()) {
      for (std::size_t i = 0; i < done.size(); ++i) {
        if (done[i].old == node.old && done[i].next == node.next) {
          for (std::uint32_t in : node.incoming) add_incoming(done[i], in);
          return;
        }
      }
      if (done.size() >= max_nodes)
        throw BudgetError(max_nodes);
      std::uint32_t id = std::uint32_t(done.size());
      done.push_back(node);
      TNode succ;
      succ.incoming = {id};
      succ.news = node.next;
      expand(std::move(succ));
      return;
    }

    FormulaId eta = node.news.v.front();
    node.news.erase_front();
    const FNode n = a.node(eta);  // by value: f_not below may grow the arena

    if (node.old.contains(eta)) {
      expand(std::move(node));
      return;
    }

    switch (n.kind) {
      case FKind::True:
        expand(std::move(node));
        return;
      case FKind::False:
        return;  // inconsistent node, dropped
      case FKind::Atom: {
        FormulaId neg = a_mut().f_not(eta);
        if (node.old.contains(neg)) return;
        node.old.insert(eta);
        expand(std::move(node));
        return;
      }
      case FKind::Not: {  // NNF: operand is an atom
        if (node.old.contains(n.lhs)) return;
        node.old.insert(eta);
        expand(std::move(node));
        return;
      }
      case FKind::And: {
        if (!node.old.contains(n.lhs)) node.news.insert(n.lhs);
        if (!node.old.contains(n.rhs)) node.news.insert(n.rhs);
        node.old.insert(eta);
        expand(std::move(node));
        return;
      }
      case FKind::Or: {
        TNode n1 = node, n2 = node;
        n1.old.insert(eta);
        n2.old.insert(eta);
        if (!n1.old.contains(n.lhs)) n1.news.insert(n.lhs);
        if (!n2.old.contains(n.rhs)) n2.news.insert(n.rhs);
        expand(std::move(n1));
        expand(std::move(n2));
        return;
      }
      case FKind::Next: {
        node.old.insert(eta);
        node.next.insert(n.lhs);
        expand(std::move(node));
        return;
      }
      case FKind::Until: {
        TNode n1 = node, n2 = node;
        n1.old.insert(eta);
        n2.old.insert(eta);
        if (!n1.old.contains(n.lhs)) n1.news.insert(n.lhs);
        n1.next.insert(eta);
        if (!n2.old.contains(n.rhs)) n2.news.insert(n.rhs);
        expand(std::move(n1));
        expand(std::move(n2));
        return;
      }
      case FKind::Release: {
        TNode n1 = node, n2 = node;
        n1.old.insert(eta);
        n2.old.insert(eta);
        if (!n1.old.contains(n.lhs)) n1.news.insert(n.lhs);
        if (!n1.old.contains(n.rhs)) n1.news.insert(n.rhs);
        if (!n2.old.contains(n.rhs)) n2.news.insert(n.rhs);
        n2.next.insert(eta);
        expand(std::move(n1));
        expand(std::move(n2));
        return;
      }
      default:
        throw NetError("unexpected operator in NNF tableau input");
    }
  }

  // f_not needs a mutable arena; the reference we hold is mutable already.
  FormulaArena& a_mut() { return a; }
};

}  // namespace

BuchiAutomaton ltl_to_buchi(FormulaArena& a, FormulaId phi,
                            std::size_t max_nodes) {
  FormulaId nnf = to_nnf(a, phi);

  std::vector<FormulaId> conjuncts;
  collect_conjuncts(a, nnf, conjuncts);
  std::vector<FormulaId> fairness;
  std::vector<FormulaId> kept;
  for (FormulaId c : conjuncts) {
    FormulaId prop;
    if (match_gf_disjunction(a, c, prop))
      fairness.push_back(prop);
    else
      kept.push_back(c);
  }
  FormulaId rest = kept.empty() ? a.tru() : a.and_all(kept);

  Tableau tab{a, max_nodes, {}};
  TNode init;
  init.incoming = {kInit};
  init.news.insert(rest);
  tab.expand(std::move(init));

  // until subformulas of the tableau input, in formula-id order
  std::vector<FormulaId> untils;
  {
    std::vector<bool> seen(a.num_nodes(), false);
    std::vector<FormulaId> stack{rest};
    while (!stack.empty()) {
      FormulaId x = stack.back();
      stack.pop_back();
      if (seen[x]) continue;
      seen[x] = true;
      const FNode& n = a.node(x);
      if (n.kind == FKind::Until) untils.push_back(x);
      if (n.lhs != kNoFormula) stack.push_back(n.lhs);
      if (n.rhs != kNoFormula) stack.push_back(n.rhs);
    }
    std::sort(untils.begin(), untils.end());
  }

  if (untils.size() + fairness.size() > 63)
    throw NetError("too many acceptance sets (" +
                   std::to_string(untils.size() + fairness.size()) + ")");

  BuchiAutomaton aut;
  aut.num_tableau_sets = std::uint32_t(untils.size());
  aut.num_sets = std::uint32_t(untils.size() + fairness.size());
  aut.fairness_props = std::move(fairness);
  aut.states.resize(tab.done.size() + 1);

  for (std::size_t i = 0; i < tab.done.size(); ++i) {
    const TNode& nd = tab.done[i];
    BuchiState& st = aut.states[i + 1];
    for (FormulaId f : nd.old.v) {
      const FNode& n = a.node(f);
      if (n.kind == FKind::Atom) st.pos_lits.push_back(f);
      else if (n.kind == FKind::Not && a.node(n.lhs).kind == FKind::Atom)
        st.neg_lits.push_back(n.lhs);
    }
    for (std::size_t u = 0; u < untils.size(); ++u) {
      FormulaId rhs = a.node(untils[u]).rhs;
      if (!nd.old.contains(untils[u]) || nd.old.contains(rhs))
        st.acc_mask |= std::uint64_t(1) << u;
    }
    for (std::uint32_t from : nd.incoming) {
      std::uint32_t src = from == kInit ? 0 : from + 1;
      aut.states[src].succ.push_back(std::uint32_t(i + 1));
    }
  }
  for (auto& st : aut.states) std::sort(st.succ.begin(), st.succ.end());
  return aut;
}

bool buchi_accepts_lasso(const FormulaArena& a, const BuchiAutomaton& aut,
                         const Lasso& lasso) {
  const std::size_t P = lasso.prefix.size();
  const std::size_t L = lasso.loop.size();
  if (L == 0) throw NetError("lasso loop is empty");

  auto letter_at = [&](std::size_t i) {
    const Step& s = lasso.at(i);
    return Letter{&s.marking, s.fired};
  };

  // propagate through the prefix
  std::vector<bool> cur(aut.states.size(), false), nxt(aut.states.size());
  cur[0] = true;
  for (std::size_t i = 0; i < P; ++i) {
    Letter l = letter_at(i);
    std::fill(nxt.begin(), nxt.end(), false);
    for (std::uint32_t q = 0; q < aut.states.size(); ++q) {
      if (!cur[q]) continue;
      for (std::uint32_t q2 : aut.states[q].succ)
        if (!nxt[q2] && letter_matches(a, aut.states[q2], l)) nxt[q2] = true;
    }
    cur.swap(nxt);
  }

  // product of loop positions with automaton states
  const std::size_t Q = aut.states.size();
  auto pid = [&](std::size_t pos, std::uint32_t q) { return pos * Q + q; };
  const std::size_t N = L * Q;

  std::vector<std::uint64_t> letter_fair(L);
  for (std::size_t i = 0; i < L; ++i)
    letter_fair[i] = fairness_mask(a, aut, letter_at(P + i));

  // Tarjan over the part reachable from the after-prefix states at position 0
  std::vector<std::int32_t> index(N, -1), low(N, 0);
  std::vector<bool> on_stack(N, false);
  std::vector<std::size_t> scc_id(N, SIZE_MAX);
  std::vector<std::size_t> stack;
  std::size_t next_index = 0, next_scc = 0;

  struct Frame {
    std::size_t v;
    std::size_t succ_pos = 0;
  };

  auto successors = [&](std::size_t v, std::vector<std::size_t>& out) {
    std::size_t pos = v / Q;
    std::uint32_t q = std::uint32_t(v % Q);
    Letter l = letter_at(P + pos);
    std::size_t npos = (pos + 1) % L;
    for (std::uint32_t q2 : aut.states[q].succ)
      if (letter_matches(a, aut.states[q2], l)) out.push_back(pid(npos, q2));
  };

  std::vector<std::vector<std::size_t>> succ_cache(N);
  std::vector<bool> succ_cached(N, false);
  auto get_succ = [&](std::size_t v) -> const std::vector<std::size_t>& {
    if (!succ_cached[v]) {
      successors(v, succ_cache[v]);
      succ_cached[v] = true;
    }
    return succ_cache[v];
  };

  std::vector<std::size_t> scc_members_start;  // per scc: member list below
  std::vector<std::size_t> member_pool;

  std::vector<Frame> frames;
  for (std::uint32_t q0 = 0; q0 < Q; ++q0) {
    if (!cur[q0]) continue;
    std::size_t root = pid(0, q0);
    if (index[root] != -1) continue;
    frames.push_back({root});
    index[root] = low[root] = std::int32_t(next_index++);
    stack.push_back(root);
    on_stack[root] = true;
    while (!frames.empty()) {
      Frame& fr = frames.back();
      const auto& ss = get_succ(fr.v);
      if (fr.succ_pos < ss.size()) {
        std::size_t w = ss[fr.succ_pos++];
        if (index[w] == -1) {
          index[w] = low[w] = std::int32_t(next_index++);
          stack.push_back(w);
          on_stack[w] = true;
          frames.push_back({w});
        } else if (on_stack[w]) {
          low[fr.v] = std::min(low[fr.v], index[w]);
        }
      } else {
        std::size_t v = fr.v;
        frames.pop_back();
        if (!frames.empty())
          low[frames.back().v] = std::min(low[frames.back().v], low[v]);
        if (low[v] == index[v]) {
          scc_members_start.push_back(member_pool.size());
          while (true) {
            std::size_t w = stack.back();
            stack.pop_back();
            on_stack[w] = false;
            scc_id[w] = next_scc;
            member_pool.push_back(w);
            if (w == v) break;
          }
          ++next_scc;
        }
      }
    }
  }
  scc_members_start.push_back(member_pool.size());

  const std::uint64_t want = aut.full_mask();
  for (std::size_t s = 0; s < next_scc; ++s) {
    std::uint64_t got = 0;
    bool has_edge = false;
    for (std::size_t mi = scc_members_start[s]; mi < scc_members_start[s + 1];
         ++mi) {
      std::size_t v = member_pool[mi];
      std::size_t pos = v / Q;
      std::uint32_t q = std::uint32_t(v % Q);
      for (std::size_t w : get_succ(v)) {
        if (scc_id[w] != s) continue;
        has_edge = true;
        got |= aut.states[q].acc_mask | letter_fair[pos];
      }
    }
    if (has_edge && (got & want) == want) return true;
  }
  return false;
}

}  // namespace transitmc
