#include "transitmc/petri.hpp"

#include <algorithm>

namespace transitmc {

static std::string join_trace(const std::vector<std::string>& trace) {
  std::string s;
  for (const auto& t : trace) {
    if (!s.empty()) s += ", ";
    s += t;
  }
  return s;
}

SafenessError::SafenessError(std::string place_, std::vector<std::string> trace_)
    : std::runtime_error("net is not safe: place '" + place_ +
                         "' receives a second token after [" +
                         join_trace(trace_) + "]"),
      place(std::move(place_)),
      trace(std::move(trace_)) {}

NodeId PetriNet::add_place(const std::string& pname, bool initially_marked) {
  if (find_place(pname)) throw NetError("duplicate place '" + pname + "'");
  place_names_.push_back(pname);
  initial_.push_back(initially_marked);
  return NodeId(place_names_.size() - 1);
}

NodeId PetriNet::add_transition(const std::string& tname) {
  if (find_transition(tname))
    throw NetError("duplicate transition '" + tname + "'");
  transitions_.push_back(TransitionData{tname, {}, {}, {}});
  return NodeId(transitions_.size() - 1);
}

static void insert_sorted(std::vector<NodeId>& v, NodeId x,
                          const char* what, const std::string& tname) {
  auto it = std::lower_bound(v.begin(), v.end(), x);
  if (it != v.end() && *it == x)
    throw NetError(std::string("duplicate ") + what + " arc at transition '" +
                   tname + "'");
  v.insert(it, x);
}

void PetriNet::add_arc_pt(NodeId p, NodeId t) {
  insert_sorted(transitions_[t].preset, p, "place->transition",
                transitions_[t].name);
}

void PetriNet::add_arc_tp(NodeId t, NodeId p) {
  insert_sorted(transitions_[t].postset, p, "transition->place",
                transitions_[t].name);
}

void PetriNet::add_inhibitor(NodeId p, NodeId t) {
  insert_sorted(transitions_[t].inhibitors, p, "inhibitor",
                transitions_[t].name);
}

std::optional<NodeId> PetriNet::find_place(const std::string& pname) const {
  for (NodeId i = 0; i < place_names_.size(); ++i)
    if (place_names_[i] == pname) return i;
  return std::nullopt;
}

std::optional<NodeId> PetriNet::find_transition(const std::string& tname) const {
  for (NodeId i = 0; i < transitions_.size(); ++i)
    if (transitions_[i].name == tname) return i;
  return std::nullopt;
}

Marking PetriNet::initial_marking() const {
  Marking m(num_places());
  for (NodeId p = 0; p < initial_.size(); ++p)
    if (initial_[p]) m.set(p);
  return m;
}

void PetriNet::mark_initially(NodeId p) { initial_[p] = true; }

bool PetriNet::enabled(const Marking& m, NodeId t) const {
  const auto& td = transitions_[t];
  for (NodeId p : td.preset)
    if (!m.test(p)) return false;
  for (NodeId p : td.inhibitors)
    if (m.test(p)) return false;
  return true;
}

Marking PetriNet::fire(const Marking& m, NodeId t,
                       const std::vector<std::string>* trace) const {
  const auto& td = transitions_[t];
  Marking out = m;
  for (NodeId p : td.preset) out.clear(p);
  for (NodeId p : td.postset) {
    if (out.test(p)) {
      std::vector<std::string> tr = trace ? *trace : std::vector<std::string>{};
      tr.push_back(td.name);
      throw SafenessError(place_name(p), tr);
    }
    out.set(p);
  }
  return out;
}

void PetriNetWithTransits::add_transit(NodeId t, std::optional<NodeId> source,
                                       NodeId target) {
  if (transits_.size() < num_transitions()) transits_.resize(num_transitions());
  const auto& td = transition(t);
  if (source) {
    if (!std::binary_search(td.preset.begin(), td.preset.end(), *source))
      throw NetError("transit source '" + place_name(*source) +
                     "' is not in the preset of '" + td.name + "'");
  }
  if (!std::binary_search(td.postset.begin(), td.postset.end(), target))
    throw NetError("transit target '" + place_name(target) +
                   "' is not in the postset of '" + td.name + "'");

  Transit tr{source, target};
  auto key = [this](const Transit& x) {
    // creation transits sort before all place sources
    std::string s = x.source ? place_name(*x.source) : std::string();
    return std::make_pair(s, place_name(x.target));
  };
  auto& vec = transits_[t];
  auto it = std::lower_bound(vec.begin(), vec.end(), tr,
                             [&](const Transit& a, const Transit& b) {
                               return key(a) < key(b);
                             });
  if (it != vec.end() && *it == tr)
    throw NetError("duplicate transit at transition '" + td.name + "'");
  vec.insert(it, tr);
}

const std::vector<Transit>& PetriNetWithTransits::transits(NodeId t) const {
  static const std::vector<Transit> kEmpty;
  if (t >= transits_.size()) return kEmpty;
  return transits_[t];
}

bool PetriNetWithTransits::has_any_transit() const {
  for (const auto& v : transits_)
    if (!v.empty()) return true;
  return false;
}

void extend_chains(const PetriNetWithTransits& net, NodeId t,
                   std::vector<FlowChain>& chains) {
  const auto& td = net.transition(t);
  const auto& trs = net.transits(t);

  std::vector<FlowChain> out;
  out.reserve(chains.size());
  for (auto& ch : chains) {
    if (ch.ended || ch.places.empty()) {
      out.push_back(std::move(ch));
      continue;
    }
    NodeId at = ch.places.back();
    bool consumed =
        std::binary_search(td.preset.begin(), td.preset.end(), at);
    if (!consumed) {
      out.push_back(std::move(ch));
      continue;
    }
    bool moved = false;
    for (const auto& tr : trs) {
      if (tr.source && *tr.source == at) {
        FlowChain next = ch;
        next.places.push_back(tr.target);
        out.push_back(std::move(next));
        moved = true;
      }
    }
    if (!moved) {
      ch.ended = true;
      out.push_back(std::move(ch));
    }
  }
  for (const auto& tr : trs) {
    if (!tr.source) {
      FlowChain fresh;
      fresh.places.push_back(tr.target);
      out.push_back(std::move(fresh));
    }
  }
  chains = std::move(out);
}

}  // namespace transitmc
