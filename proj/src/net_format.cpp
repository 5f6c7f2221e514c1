#include "transitmc/net_format.hpp"

#include <cctype>
#include <fstream>
#include <sstream>

namespace transitmc {

bool is_identifier(const std::string& s) {
  if (s.empty()) return false;
  if (!std::isalpha(static_cast<unsigned char>(s[0])) && s[0] != '_')
    return false;
  for (char c : s) {
    if (!std::isalnum(static_cast<unsigned char>(c)) && c != '_' && c != '.')
      return false;
  }
  return true;
}

namespace {

struct Line {
  int number;
  std::vector<std::string> tokens;
};

[[noreturn]] void fail(int line, const std::string& msg) {
  throw ParseError("line " + std::to_string(line) + ": " + msg);
}

std::vector<Line> tokenize(const std::string& text) {
  std::vector<Line> lines;
  std::istringstream in(text);
  std::string raw;
  int no = 0;
  while (std::getline(in, raw)) {
    ++no;
    auto hash = raw.find('#');
    if (hash != std::string::npos) raw.erase(hash);
    Line line{no, {}};
    std::istringstream ls(raw);
    std::string tok;
    while (ls >> tok) line.tokens.push_back(tok);
    if (!line.tokens.empty()) lines.push_back(std::move(line));
  }
  return lines;
}

NodeId need_place(const PetriNet& net, const std::string& name, int line) {
  auto p = net.find_place(name);
  if (!p) fail(line, "unknown place '" + name + "'");
  return *p;
}

NodeId need_transition(const PetriNet& net, const std::string& name, int line) {
  auto t = net.find_transition(name);
  if (!t) fail(line, "unknown transition '" + name + "'");
  return *t;
}

}  // namespace

PetriNetWithTransits parse_net(const std::string& text) {
  PetriNetWithTransits net;
  auto lines = tokenize(text);

  enum Section { NONE, PLACES, INITIAL, TRANSITIONS, ARCS, INHIBITORS, TRANSITS };
  Section sec = NONE;
  bool named = false;

  for (std::size_t i = 0; i < lines.size(); ++i) {
    const Line& line = lines[i];
    const auto& toks = line.tokens;
    const std::string& head = toks[0];

    if (head == "[net]") {
      if (named) fail(line.number, "repeated [net] section");
      if (toks.size() != 2 || !is_identifier(toks[1]))
        fail(line.number, "[net] expects a single name");
      net.name = toks[1];
      named = true;
      sec = NONE;
      continue;
    }
    if (head == "[places]" || head == "[initial]" || head == "[transitions]") {
      sec = head == "[places]" ? PLACES
            : head == "[initial]" ? INITIAL
                                  : TRANSITIONS;
      for (std::size_t k = 1; k < toks.size(); ++k) {
        if (!is_identifier(toks[k]))
          fail(line.number, "bad identifier '" + toks[k] + "'");
        if (sec == PLACES) {
          if (net.find_transition(toks[k]))
            fail(line.number, "'" + toks[k] + "' already names a transition");
          net.add_place(toks[k]);
        } else if (sec == INITIAL) {
          NodeId p = need_place(net, toks[k], line.number);
          if (net.initially_marked(p))
            fail(line.number, "place '" + toks[k] + "' marked twice");
          net.mark_initially(p);
        } else {
          if (net.find_place(toks[k]))
            fail(line.number, "'" + toks[k] + "' already names a place");
          net.add_transition(toks[k]);
        }
      }
      continue;
    }
    if (head == "[arcs]" || head == "[inhibitors]" || head == "[transits]") {
      if (toks.size() != 1) fail(line.number, head + " takes no arguments");
      sec = head == "[arcs]" ? ARCS
            : head == "[inhibitors]" ? INHIBITORS
                                     : TRANSITS;
      continue;
    }
    if (head.size() >= 1 && head[0] == '[')
      fail(line.number, "unknown section '" + head + "'");

    switch (sec) {
      case ARCS: {
        if (toks.size() != 3 || toks[1] != "->")
          fail(line.number, "expected 'p -> t' or 't -> p'");
        auto p1 = net.find_place(toks[0]);
        auto t1 = net.find_transition(toks[0]);
        try {
          if (p1) {
            net.add_arc_pt(*p1, need_transition(net, toks[2], line.number));
          } else if (t1) {
            net.add_arc_tp(*t1, need_place(net, toks[2], line.number));
          } else {
            fail(line.number, "unknown node '" + toks[0] + "'");
          }
        } catch (const NetError& e) {
          fail(line.number, e.what());
        }
        break;
      }
      case INHIBITORS: {
        if (toks.size() != 3 || toks[1] != "-o")
          fail(line.number, "expected 'p -o t'");
        try {
          net.add_inhibitor(need_place(net, toks[0], line.number),
                            need_transition(net, toks[2], line.number));
        } catch (const NetError& e) {
          fail(line.number, e.what());
        }
        break;
      }
      case TRANSITS: {
        std::string tname, src, dst;
        if (toks.size() == 5 && toks[1] == ":" && toks[3] == "->") {
          tname = toks[0];
          src = toks[2];
          dst = toks[4];
        } else if (toks.size() == 4 && !toks[0].empty() &&
                   toks[0].back() == ':' && toks[2] == "->") {
          tname = toks[0].substr(0, toks[0].size() - 1);
          src = toks[1];
          dst = toks[3];
        } else {
          fail(line.number, "expected 't: p -> q' or 't: > -> q'");
        }
        NodeId t = need_transition(net, tname, line.number);
        std::optional<NodeId> source;
        if (src != ">") source = need_place(net, src, line.number);
        try {
          net.add_transit(t, source, need_place(net, dst, line.number));
        } catch (const NetError& e) {
          fail(line.number, e.what());
        }
        break;
      }
      default:
        fail(line.number, "content outside any section");
    }
  }

  if (!named) throw ParseError("missing [net] section");
  return net;
}

PetriNetWithTransits load_net(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ParseError("cannot open '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  try {
    return parse_net(buf.str());
  } catch (const ParseError& e) {
    throw ParseError(path + ": " + e.what());
  }
}

std::string serialize_net(const PetriNetWithTransits& net) {
  std::string out = serialize_net(static_cast<const PetriNet&>(net));
  if (!net.has_any_transit()) return out;
  std::ostringstream ts;
  ts << "[transits]\n";
  for (NodeId t = 0; t < net.num_transitions(); ++t) {
    for (const auto& tr : net.transits(t)) {
      ts << net.transition_name(t) << ": "
         << (tr.source ? net.place_name(*tr.source) : std::string(">"))
         << " -> " << net.place_name(tr.target) << "\n";
    }
  }
  return out + ts.str();
}

std::string serialize_net(const PetriNet& net) {
  std::ostringstream out;
  out << "[net] " << net.name << "\n";

  out << "[places]";
  for (NodeId p = 0; p < net.num_places(); ++p)
    out << ' ' << net.place_name(p);
  out << "\n[initial]";
  for (NodeId p = 0; p < net.num_places(); ++p)
    if (net.initially_marked(p)) out << ' ' << net.place_name(p);
  out << "\n[transitions]";
  for (NodeId t = 0; t < net.num_transitions(); ++t)
    out << ' ' << net.transition_name(t);
  out << "\n";

  out << "[arcs]\n";
  for (NodeId t = 0; t < net.num_transitions(); ++t) {
    const auto& td = net.transition(t);
    for (NodeId p : td.preset)
      out << net.place_name(p) << " -> " << td.name << "\n";
    for (NodeId p : td.postset)
      out << td.name << " -> " << net.place_name(p) << "\n";
  }

  bool any_inhib = false;
  for (NodeId t = 0; t < net.num_transitions(); ++t)
    if (!net.transition(t).inhibitors.empty()) any_inhib = true;
  if (any_inhib) {
    out << "[inhibitors]\n";
    for (NodeId t = 0; t < net.num_transitions(); ++t)
      for (NodeId p : net.transition(t).inhibitors)
        out << net.place_name(p) << " -o " << net.transition_name(t) << "\n";
  }
  return out.str();
}

}  // namespace transitmc
