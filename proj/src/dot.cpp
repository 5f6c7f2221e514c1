#include "transitmc/dot.hpp"

#include <fstream>
#include <sstream>

namespace transitmc {

namespace {

const char* kPalette[8] = {"#e41a1c", "#377eb8", "#4daf4a", "#984ea3",
                           "#ff7f00", "#a65628", "#f781bf", "#666666"};

std::string quoted(const std::string& s) {
  std::string out = "\"";
  for (char c : s) {
    if (c == '"' || c == '\\') out += '\\';
    out += c;
  }
  return out + "\"";
}

}  // namespace

namespace {

void dot_net_body(const PetriNet& net, std::ostringstream& out) {
  out << "digraph " << quoted(net.name.empty() ? "net" : net.name) << " {\n";
  out << "  rankdir=LR;\n";
  out << "  node [fontsize=11];\n";
  for (NodeId p = 0; p < net.num_places(); ++p) {
    out << "  " << quoted(net.place_name(p)) << " [shape=circle";
    if (net.initially_marked(p)) out << ", peripheries=2, xlabel=\"•\"";
    out << "];\n";
  }
  for (NodeId t = 0; t < net.num_transitions(); ++t)
    out << "  " << quoted(net.transition_name(t)) << " [shape=box];\n";
  for (NodeId t = 0; t < net.num_transitions(); ++t) {
    const auto& td = net.transition(t);
    const std::string tq = quoted(td.name);
    for (NodeId p : td.preset)
      out << "  " << quoted(net.place_name(p)) << " -> " << tq << ";\n";
    for (NodeId p : td.postset)
      out << "  " << tq << " -> " << quoted(net.place_name(p)) << ";\n";
    for (NodeId p : td.inhibitors)
      out << "  " << quoted(net.place_name(p)) << " -> " << tq
          << " [style=dotted, arrowhead=odot];\n";
  }
}

}  // namespace

std::string dot_net(const PetriNet& net) {
  std::ostringstream out;
  dot_net_body(net, out);
  out << "}\n";
  return out.str();
}

std::string dot_net(const PetriNetWithTransits& net) {
  std::ostringstream out;
  dot_net_body(net, out);
  for (NodeId t = 0; t < net.num_transitions(); ++t) {
    const auto& td = net.transition(t);
    const std::string tq = quoted(td.name);
    const char* color = kPalette[t % 8];
    for (const auto& tr : net.transits(t)) {
      out << "  "
          << (tr.source ? quoted(net.place_name(*tr.source)) : tq) << " -> "
          << quoted(net.place_name(tr.target)) << " [style=dashed, color="
          << quoted(color) << ", fontcolor=" << quoted(color) << ", label="
          << quoted(tr.source ? td.name : td.name + " >") << "];\n";
    }
  }
  out << "}\n";
  return out.str();
}

std::string dot_state_graph(const PetriNet& net, const StateGraph& graph) {
  std::ostringstream out;
  out << "digraph states {\n  rankdir=LR;\n  node [shape=box, fontsize=10];\n";
  for (std::size_t s = 0; s < graph.num_states(); ++s) {
    std::string label;
    for (NodeId p = 0; p < net.num_places(); ++p) {
      if (!graph.markings[s].test(p)) continue;
      if (!label.empty()) label += ',';
      label += net.place_name(p);
    }
    if (label.empty()) label = "∅";
    out << "  s" << s << " [label=" << quoted(label)
        << (s == 0 ? ", penwidth=2" : "") << "];\n";
  }
  for (std::size_t s = 0; s < graph.num_states(); ++s) {
    for (const auto& e : graph.out[s]) {
      out << "  s" << s << " -> s" << e.target;
      if (e.fired)
        out << " [label=" << quoted(net.transition_name(*e.fired)) << "]";
      else
        out << " [style=dashed]";
      out << ";\n";
    }
  }
  out << "}\n";
  return out.str();
}

void write_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw NetError("cannot write '" + path + "'");
  out << content;
  if (!out) throw NetError("error while writing '" + path + "'");
}

}  // namespace transitmc
