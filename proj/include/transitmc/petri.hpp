#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace transitmc {

using NodeId = std::uint32_t;

struct NetError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct ParseError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Raised when the state budget is exhausted before the search finished.
struct BudgetError : std::runtime_error {
  explicit BudgetError(std::size_t limit)
      : std::runtime_error("state budget exhausted (limit " +
                           std::to_string(limit) + ")"),
        limit(limit) {}
  std::size_t limit;
};

// Raised when firing would put a second token on a place. The checker only
// supports safe nets, so this is a hard input error, reported with the
// firing sequence that produced it.
struct SafenessError : std::runtime_error {
  SafenessError(std::string place, std::vector<std::string> trace);
  std::string place;
  std::vector<std::string> trace;
};

// Fixed-width bitset over places. Nets are small; two words cover 128 places
// and the vector grows past that if needed.
struct Marking {
  std::vector<std::uint64_t> bits;

  Marking() = default;
  explicit Marking(std::size_t num_places)
      : bits((num_places + 63) / 64, 0) {}

  bool test(NodeId p) const { return (bits[p >> 6] >> (p & 63)) & 1; }
  void set(NodeId p) { bits[p >> 6] |= std::uint64_t(1) << (p & 63); }
  void clear(NodeId p) { bits[p >> 6] &= ~(std::uint64_t(1) << (p & 63)); }

  bool operator==(const Marking& o) const { return bits == o.bits; }
  bool operator<(const Marking& o) const { return bits < o.bits; }
};

struct MarkingHash {
  std::size_t operator()(const Marking& m) const {
    std::size_t h = 1469598103934665603ull;
    for (std::uint64_t w : m.bits) {
      h ^= w;
      h *= 1099511628211ull;
    }
    return h;
  }
};

struct TransitionData {
  std::string name;
  std::vector<NodeId> preset;   // sorted
  std::vector<NodeId> postset;  // sorted
  std::vector<NodeId> inhibitors;  // sorted; transition disabled if any marked
};

// Safe place/transition net with inhibitor arcs. Places and transitions keep
// their declaration order; that order drives every serialization and search.
class PetriNet {
 public:
  std::string name;

  NodeId add_place(const std::string& pname, bool initially_marked = false);
  NodeId add_transition(const std::string& tname);
  void add_arc_pt(NodeId p, NodeId t);
  void add_arc_tp(NodeId t, NodeId p);
  void add_inhibitor(NodeId p, NodeId t);

  std::size_t num_places() const { return place_names_.size(); }
  std::size_t num_transitions() const { return transitions_.size(); }

  const std::string& place_name(NodeId p) const { return place_names_[p]; }
  const std::string& transition_name(NodeId t) const {
    return transitions_[t].name;
  }
  const TransitionData& transition(NodeId t) const { return transitions_[t]; }

  std::optional<NodeId> find_place(const std::string& pname) const;
  std::optional<NodeId> find_transition(const std::string& tname) const;

  Marking initial_marking() const;
  void mark_initially(NodeId p);
  bool initially_marked(NodeId p) const { return initial_[p]; }

  bool enabled(const Marking& m, NodeId t) const;
  // Fires t from m. `trace` is only used to report a safeness violation.
  Marking fire(const Marking& m, NodeId t,
               const std::vector<std::string>* trace = nullptr) const;

 private:
  std::vector<std::string> place_names_;
  std::vector<TransitionData> transitions_;
  std::vector<bool> initial_;
};

// One transit of a transition: `source -> target` moves (or forks) the flow
// chains sitting on `source` onto `target`; a missing source starts a fresh
// chain on `target`.
struct Transit {
  std::optional<NodeId> source;  // nullopt = chain creation
  NodeId target;

  bool operator==(const Transit& o) const {
    return source == o.source && target == o.target;
  }
};

class PetriNetWithTransits : public PetriNet {
 public:
  // Validates source ∈ preset(t) and target ∈ postset(t). Transits are kept
  // sorted by (source name, target name) with creation transits first, so
  // the order is stable under re-parsing.
  void add_transit(NodeId t, std::optional<NodeId> source, NodeId target);
  const std::vector<Transit>& transits(NodeId t) const;
  bool has_any_transit() const;

 private:
  std::vector<std::vector<Transit>> transits_;
};

// A flow chain captured from a run: the sequence of places the chain visits,
// each paired with the step index of the transition that moved it there
// (nullopt for the creating step's target... see extend below).
struct FlowChain {
  std::vector<NodeId> places;
  bool ended = false;  // a transition consumed the chain's place w/o a transit
};

// One step of a run over the original net. `fired == nullopt` is the
// stutter step appended when the run deadlocks (or, in counterexamples
// mapped back from the reduced net, when only tracking progressed).
struct Step {
  Marking marking;  // marking *before* the step
  std::optional<NodeId> fired;
};

struct Lasso {
  std::vector<Step> prefix;
  std::vector<Step> loop;  // nonempty; loops back to its own first marking

  std::size_t size() const { return prefix.size() + loop.size(); }
  const Step& at(std::size_t i) const {
    return i < prefix.size() ? prefix[i] : loop[i - prefix.size()];
  }
};

// Advances every chain in `chains` over one firing of `t`. A chain on place
// p moves to the targets of transits p -> q (forking if several), stays put
// if t does not consume p, and ends if t consumes p without a transit from
// p. Creation transits (> -> q) append new chains at the back, one per
// target, in transit order.
void extend_chains(const PetriNetWithTransits& net, NodeId t,
                   std::vector<FlowChain>& chains);

}  // namespace transitmc
