#include "transitmc/ltl.hpp"

#include <algorithm>
#include <functional>

namespace transitmc {

std::size_t FormulaArena::NodeHash::operator()(const FNode& n) const {
  std::size_t h = static_cast<std::size_t>(n.kind);
  auto mix = [&h](std::size_t v) {
    h ^= v + 0x9e3779b97f4a7c15ull + (h << 6) + (h >> 2);
  };
  mix(n.lhs);
  mix(n.rhs);
  mix(n.aux);
  mix(static_cast<std::size_t>(n.atom_kind));
  mix(n.atom_node);
  return h;
}

FormulaId FormulaArena::intern(FNode n) {
  auto it = node_ids_.find(n);
  if (it != node_ids_.end()) return it->second;
  FormulaId id = FormulaId(nodes_.size());
  nodes_.push_back(n);
  node_ids_.emplace(n, id);
  return id;
}

FormulaId FormulaArena::atom(const std::string& name) {
  return atom_resolved(name, AtomKind::Unresolved, 0);
}

FormulaId FormulaArena::atom_resolved(const std::string& name, AtomKind kind,
                                      NodeId node) {
  auto it = atom_ids_.find(name);
  std::uint32_t aid;
  if (it != atom_ids_.end()) {
    aid = it->second;
  } else {
    aid = std::uint32_t(atom_names_.size());
    atom_names_.push_back(name);
    atom_ids_.emplace(name, aid);
  }
  FNode n{FKind::Atom};
  n.aux = aid;
  n.atom_kind = kind;
  n.atom_node = node;
  return intern(n);
}

FormulaId FormulaArena::f_flowsub(std::uint32_t index, FormulaId body) {
  if (contains_flowsub(*this, body))
    throw ParseError("nested A operator is not allowed");
  FNode n{FKind::FlowSub, body};
  n.aux = index;
  return intern(n);
}

FormulaId FormulaArena::or_all(const std::vector<FormulaId>& xs) {
  if (xs.empty()) return fls();
  FormulaId acc = xs[0];
  for (std::size_t i = 1; i < xs.size(); ++i) acc = f_or(acc, xs[i]);
  return acc;
}

FormulaId FormulaArena::and_all(const std::vector<FormulaId>& xs) {
  if (xs.empty()) return tru();
  FormulaId acc = xs[0];
  for (std::size_t i = 1; i < xs.size(); ++i) acc = f_and(acc, xs[i]);
  return acc;
}

std::size_t FormulaArena::dag_size(FormulaId f) const {
  std::vector<bool> seen(nodes_.size(), false);
  std::vector<FormulaId> stack{f};
  std::size_t count = 0;
  while (!stack.empty()) {
    FormulaId x = stack.back();
    stack.pop_back();
    if (seen[x]) continue;
    seen[x] = true;
    ++count;
    const FNode& n = nodes_[x];
    if (n.lhs != kNoFormula) stack.push_back(n.lhs);
    if (n.rhs != kNoFormula) stack.push_back(n.rhs);
  }
  return count;
}

namespace {

template <typename Fn>
void walk(const FormulaArena& a, FormulaId f, Fn&& fn) {
  std::vector<bool> seen(a.num_nodes(), false);
  std::vector<FormulaId> stack{f};
  while (!stack.empty()) {
    FormulaId x = stack.back();
    stack.pop_back();
    if (seen[x]) continue;
    seen[x] = true;
    fn(x);
    const FNode& n = a.node(x);
    if (n.lhs != kNoFormula) stack.push_back(n.lhs);
    if (n.rhs != kNoFormula) stack.push_back(n.rhs);
  }
}

}  // namespace

std::vector<FormulaId> flow_subformulas(const FormulaArena& a, FormulaId f) {
  std::vector<std::pair<std::uint32_t, FormulaId>> found;
  walk(a, f, [&](FormulaId x) {
    const FNode& n = a.node(x);
    if (n.kind == FKind::FlowSub) found.emplace_back(n.aux, n.lhs);
  });
  std::sort(found.begin(), found.end());
  std::vector<FormulaId> out;
  for (std::size_t i = 0; i < found.size(); ++i) {
    if (found[i].first != i + 1)
      throw NetError("flow subformula indices are not contiguous");
    out.push_back(found[i].second);
  }
  return out;
}

bool contains_flowsub(const FormulaArena& a, FormulaId f) {
  bool any = false;
  walk(a, f, [&](FormulaId x) {
    if (a.node(x).kind == FKind::FlowSub) any = true;
  });
  return any;
}

FormulaId resolve_atoms(FormulaArena& a, FormulaId f, const PetriNet& net) {
  std::vector<std::string> unknown;
  std::unordered_map<FormulaId, FormulaId> memo;

  std::function<FormulaId(FormulaId)> go = [&](FormulaId x) -> FormulaId {
    auto it = memo.find(x);
    if (it != memo.end()) return it->second;
    FNode n = a.node(x);
    FormulaId out = kNoFormula;
    if (n.kind == FKind::Atom) {
      const std::string name = a.atom_name(n);
      auto p = net.find_place(name);
      auto t = net.find_transition(name);
      if (p && t) throw ParseError("'" + name + "' names both a place and a transition");
      if (p) {
        out = a.atom_resolved(name, AtomKind::Place, *p);
      } else if (t) {
        out = a.atom_resolved(name, AtomKind::Transition, *t);
      } else {
        unknown.push_back(name);
        out = x;
      }
    } else {
      FormulaId l = n.lhs == kNoFormula ? kNoFormula : go(n.lhs);
      FormulaId r = n.rhs == kNoFormula ? kNoFormula : go(n.rhs);
      if (n.kind == FKind::FlowSub) {
        out = a.f_flowsub(n.aux, l);
      } else if (l == n.lhs && r == n.rhs) {
        out = x;
      } else {
        switch (n.kind) {
          case FKind::Not: out = a.f_not(l); break;
          case FKind::And: out = a.f_and(l, r); break;
          case FKind::Or: out = a.f_or(l, r); break;
          case FKind::Imp: out = a.f_imp(l, r); break;
          case FKind::Next: out = a.f_next(l); break;
          case FKind::Until: out = a.f_until(l, r); break;
          case FKind::WeakUntil: out = a.f_wuntil(l, r); break;
          case FKind::Release: out = a.f_release(l, r); break;
          case FKind::Always: out = a.f_always(l); break;
          case FKind::Eventually: out = a.f_eventually(l); break;
          default: out = x; break;
        }
      }
    }
    memo.emplace(x, out);
    return out;
  };

  FormulaId result = go(f);
  if (!unknown.empty()) {
    std::sort(unknown.begin(), unknown.end());
    unknown.erase(std::unique(unknown.begin(), unknown.end()), unknown.end());
    std::string msg = "unknown atoms:";
    for (const auto& u : unknown) msg += " '" + u + "'";
    throw ParseError(msg);
  }
  return result;
}

namespace {

// polarity true = formula itself, false = its negation
FormulaId nnf_rec(FormulaArena& a, FormulaId f, bool pos,
                  std::unordered_map<std::uint64_t, FormulaId>& memo) {
  std::uint64_t key = (std::uint64_t(f) << 1) | (pos ? 1 : 0);
  auto it = memo.find(key);
  if (it != memo.end()) return it->second;

  const FNode n = a.node(f);
  FormulaId out = kNoFormula;
  switch (n.kind) {
    case FKind::True:
      out = pos ? a.tru() : a.fls();
      break;
    case FKind::False:
      out = pos ? a.fls() : a.tru();
      break;
    case FKind::Atom:
      out = pos ? f : a.f_not(f);
      break;
    case FKind::Not:
      out = nnf_rec(a, n.lhs, !pos, memo);
      break;
    case FKind::And: {
      FormulaId l = nnf_rec(a, n.lhs, pos, memo);
      FormulaId r = nnf_rec(a, n.rhs, pos, memo);
      out = pos ? a.f_and(l, r) : a.f_or(l, r);
      break;
    }
    case FKind::Or: {
      FormulaId l = nnf_rec(a, n.lhs, pos, memo);
      FormulaId r = nnf_rec(a, n.rhs, pos, memo);
      out = pos ? a.f_or(l, r) : a.f_and(l, r);
      break;
    }
    case FKind::Imp: {
      FormulaId l = nnf_rec(a, n.lhs, !pos, memo);
      FormulaId r = nnf_rec(a, n.rhs, pos, memo);
      out = pos ? a.f_or(l, r) : a.f_and(l, r);
      break;
    }
    case FKind::Next:
      out = a.f_next(nnf_rec(a, n.lhs, pos, memo));
      break;
    case FKind::Until: {
      FormulaId l = nnf_rec(a, n.lhs, pos, memo);
      FormulaId r = nnf_rec(a, n.rhs, pos, memo);
      out = pos ? a.f_until(l, r) : a.f_release(l, r);
      break;
    }
    case FKind::Release: {
      FormulaId l = nnf_rec(a, n.lhs, pos, memo);
      FormulaId r = nnf_rec(a, n.rhs, pos, memo);
      out = pos ? a.f_release(l, r) : a.f_until(l, r);
      break;
    }
    case FKind::WeakUntil: {
      // φ W ψ ≡ ψ R (φ ∨ ψ);  ¬(φ W ψ) ≡ ¬ψ U (¬φ ∧ ¬ψ)
      FormulaId l = nnf_rec(a, n.lhs, pos, memo);
      FormulaId r = nnf_rec(a, n.rhs, pos, memo);
      out = pos ? a.f_release(r, a.f_or(l, r)) : a.f_until(r, a.f_and(l, r));
      break;
    }
    case FKind::Always: {
      FormulaId b = nnf_rec(a, n.lhs, pos, memo);
      out = pos ? a.f_release(a.fls(), b) : a.f_until(a.tru(), b);
      break;
    }
    case FKind::Eventually: {
      FormulaId b = nnf_rec(a, n.lhs, pos, memo);
      out = pos ? a.f_until(a.tru(), b) : a.f_release(a.fls(), b);
      break;
    }
    case FKind::FlowSub:
      throw NetError("flow operator in a pure-LTL context");
  }
  memo.emplace(key, out);
  return out;
}

}  // namespace

FormulaId negate_nnf(FormulaArena& a, FormulaId f) {
  std::unordered_map<std::uint64_t, FormulaId> memo;
  return nnf_rec(a, f, false, memo);
}

FormulaId to_nnf(FormulaArena& a, FormulaId f) {
  std::unordered_map<std::uint64_t, FormulaId> memo;
  return nnf_rec(a, f, true, memo);
}

}  // namespace transitmc
