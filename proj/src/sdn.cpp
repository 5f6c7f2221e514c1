#include "transitmc/sdn.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

#include "transitmc/net_format.hpp"

namespace transitmc {

namespace {

struct Tok {
  int line;
  int col;
  std::string text;
};

[[noreturn]] void fail(int line, const std::string& msg) {
  throw ParseError("line " + std::to_string(line) + ": " + msg);
}

[[noreturn]] void fail_at(const Tok& t, const std::string& msg) {
  throw ParseError("line " + std::to_string(t.line) + " col " +
                   std::to_string(t.col) + ": " + msg);
}

// Identifiers, parens, `/`, `-`, `>>`, `||`. Section headers are handled by
// the caller before this runs on the rest of the line.
void scan_tokens(const std::string& raw, std::size_t from, int line_no,
                 std::vector<Tok>& out) {
  std::size_t i = from;
  while (i < raw.size()) {
    char c = raw[i];
    if (c == '#') break;
    if (std::isspace(static_cast<unsigned char>(c))) {
      ++i;
      continue;
    }
    int col = static_cast<int>(i) + 1;
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      std::size_t j = i;
      while (j < raw.size() &&
             (std::isalnum(static_cast<unsigned char>(raw[j])) ||
              raw[j] == '_' || raw[j] == '.'))
        ++j;
      out.push_back({line_no, col, raw.substr(i, j - i)});
      i = j;
      continue;
    }
    if (c == '(' || c == ')' || c == '/' || c == '-') {
      out.push_back({line_no, col, std::string(1, c)});
      ++i;
      continue;
    }
    if (c == '>' && i + 1 < raw.size() && raw[i + 1] == '>') {
      out.push_back({line_no, col, ">>"});
      i += 2;
      continue;
    }
    if (c == '|' && i + 1 < raw.size() && raw[i + 1] == '|') {
      out.push_back({line_no, col, "||"});
      i += 2;
      continue;
    }
    fail(line_no, std::string("unexpected character '") + c + "'");
  }
}

// `upd(x.fwd(y/z))` with `-` for an absent side; `(e >> e >> ...)`;
// `(e || e || ...)`. `(e)` is plain grouping.
struct UpdateParser {
  const std::vector<Tok>& toks;
  std::size_t pos = 0;

  const Tok& peek() const {
    if (pos >= toks.size()) fail_at(toks.back(), "unexpected end of update");
    return toks[pos];
  }
  Tok take() {
    const Tok& t = peek();
    ++pos;
    return t;
  }
  Tok expect(const std::string& text) {
    const Tok& t = peek();
    if (t.text != text) fail_at(t, "expected '" + text + "'");
    ++pos;
    return t;
  }

  std::optional<std::string> rule_side() {
    Tok t = take();
    if (t.text == "-") return std::nullopt;
    if (!is_identifier(t.text)) fail_at(t, "expected a switch name or '-'");
    return t.text;
  }

  UpdateExpr parse_expr() {
    const Tok& t = peek();
    if (t.text == "upd") {
      take();
      expect("(");
      Tok head = take();
      const std::string suffix = ".fwd";
      if (head.text.size() <= suffix.size() ||
          head.text.compare(head.text.size() - suffix.size(), suffix.size(),
                            suffix) != 0)
        fail_at(head, "expected 'switch.fwd(new/old)'");
      UpdateExpr u;
      u.kind = UpdateExpr::Kind::Switch;
      u.update.sw = head.text.substr(0, head.text.size() - suffix.size());
      if (!is_identifier(u.update.sw))
        fail_at(head, "bad switch name '" + u.update.sw + "'");
      expect("(");
      u.update.next_new = rule_side();
      expect("/");
      u.update.next_old = rule_side();
      expect(")");
      expect(")");
      if (!u.update.next_new && !u.update.next_old)
        fail_at(head, "update must insert or remove a rule");
      return u;
    }
    if (t.text == "(") {
      take();
      std::vector<UpdateExpr> children;
      children.push_back(parse_expr());
      std::string op;
      while (peek().text != ")") {
        const Tok& sep = peek();
        if (sep.text != ">>" && sep.text != "||")
          fail_at(sep, "expected '>>', '||' or ')'");
        if (op.empty())
          op = sep.text;
        else if (op != sep.text)
          fail_at(sep, "mixing '>>' and '||' requires parentheses");
        take();
        children.push_back(parse_expr());
      }
      expect(")");
      if (children.size() == 1) return std::move(children.front());
      UpdateExpr u;
      u.kind = op == ">>" ? UpdateExpr::Kind::Sequential
                          : UpdateExpr::Kind::Parallel;
      u.children = std::move(children);
      return u;
    }
    fail_at(t, "expected 'upd' or '('");
  }
};

bool has_connection(const NetworkSpec& spec, const std::string& a,
                    const std::string& b) {
  for (const auto& c : spec.connections)
    if ((c.first == a && c.second == b) || (c.first == b && c.second == a))
      return true;
  return false;
}

void validate_update(const NetworkSpec& spec, const UpdateExpr& u, int line) {
  if (u.kind == UpdateExpr::Kind::Switch) {
    const SwitchUpdate& su = u.update;
    if (std::find(spec.switches.begin(), spec.switches.end(), su.sw) ==
        spec.switches.end())
      fail(line, "unknown switch '" + su.sw + "' in update");
    for (const auto& side : {su.next_new, su.next_old}) {
      if (!side) continue;
      if (std::find(spec.switches.begin(), spec.switches.end(), *side) ==
          spec.switches.end())
        fail(line, "unknown switch '" + *side + "' in update");
      if (!has_connection(spec, su.sw, *side))
        fail(line, "update rule " + su.sw + ".fwd(" + *side +
                       ") has no connection");
    }
    return;
  }
  for (const auto& c : u.children) validate_update(spec, c, line);
}

void collect_rules(const UpdateExpr& u, std::set<std::string>& out) {
  if (u.kind == UpdateExpr::Kind::Switch) {
    if (u.update.next_new) out.insert(u.update.sw + ".fwd(" + *u.update.next_new + ")");
    if (u.update.next_old) out.insert(u.update.sw + ".fwd(" + *u.update.next_old + ")");
    return;
  }
  for (const auto& c : u.children) collect_rules(c, out);
}

void check_parallel_disjoint(const UpdateExpr& u) {
  if (u.kind == UpdateExpr::Kind::Switch) return;
  if (u.kind == UpdateExpr::Kind::Parallel) {
    std::set<std::string> seen;
    for (const auto& c : u.children) {
      std::set<std::string> mine;
      collect_rules(c, mine);
      for (const auto& r : mine)
        if (!seen.insert(r).second)
          throw NetError("parallel update branches touch the same rule '" + r +
                         "'");
    }
  }
  for (const auto& c : u.children) check_parallel_disjoint(c);
}

void apply_update(const UpdateExpr& u,
                  std::map<std::string, std::string>& table) {
  if (u.kind == UpdateExpr::Kind::Switch) {
    const SwitchUpdate& su = u.update;
    if (su.next_old) {
      auto it = table.find(su.sw);
      if (it == table.end() || it->second != *su.next_old)
        throw NetError("update removes absent rule " + su.sw + ".fwd(" +
                       *su.next_old + ")");
      table.erase(it);
    }
    if (su.next_new) {
      if (table.count(su.sw))
        throw NetError("update adds a second rule for switch '" + su.sw + "'");
      table[su.sw] = *su.next_new;
    }
    return;
  }
  for (const auto& c : u.children) apply_update(c, table);
}

}  // namespace

NetworkSpec parse_network(const std::string& text) {
  NetworkSpec spec;
  enum Section { NONE, SWITCHES, CONNECTIONS, INGRESS, EGRESS, FORWARDING, UPDATE };
  Section sec = NONE;
  bool seen[7] = {};
  std::vector<Tok> update_toks;
  int update_line = 0;

  std::istringstream in(text);
  std::string raw;
  int no = 0;
  while (std::getline(in, raw)) {
    ++no;
    std::size_t start = raw.find_first_not_of(" \t\r");
    if (start == std::string::npos || raw[start] == '#') continue;

    if (raw[start] == '[') {
      auto close = raw.find(']', start);
      if (close == std::string::npos) fail(no, "unterminated section header");
      std::string name = raw.substr(start + 1, close - start - 1);
      if (name == "switches") sec = SWITCHES;
      else if (name == "connections") sec = CONNECTIONS;
      else if (name == "ingress") sec = INGRESS;
      else if (name == "egress") sec = EGRESS;
      else if (name == "forwarding") sec = FORWARDING;
      else if (name == "update") sec = UPDATE;
      else fail(no, "unknown section '[" + name + "]'");
      if (seen[sec]) fail(no, "repeated section '[" + name + "]'");
      seen[sec] = true;
      if (sec == UPDATE) update_line = no;
      start = close + 1;
    }
    if (sec == NONE) fail(no, "content outside any section");

    std::vector<Tok> toks;
    scan_tokens(raw, start, no, toks);
    if (toks.empty()) continue;

    switch (sec) {
      case SWITCHES:
      case INGRESS:
      case EGRESS: {
        auto& list = sec == SWITCHES ? spec.switches
                     : sec == INGRESS ? spec.ingress
                                      : spec.egress;
        for (const Tok& t : toks) {
          if (!is_identifier(t.text)) fail_at(t, "bad switch name '" + t.text + "'");
          if (sec != SWITCHES &&
              std::find(spec.switches.begin(), spec.switches.end(), t.text) ==
                  spec.switches.end())
            fail_at(t, "unknown switch '" + t.text + "'");
          if (std::find(list.begin(), list.end(), t.text) != list.end())
            fail_at(t, "'" + t.text + "' listed twice");
          list.push_back(t.text);
        }
        break;
      }
      case CONNECTIONS: {
        if (toks.size() != 3 || toks[1].text != "-")
          fail(no, "expected 'a - b'");
        const std::string &a = toks[0].text, &b = toks[2].text;
        for (const auto& s : {a, b})
          if (std::find(spec.switches.begin(), spec.switches.end(), s) ==
              spec.switches.end())
            fail(no, "unknown switch '" + s + "'");
        if (a == b) fail(no, "connection from '" + a + "' to itself");
        if (has_connection(spec, a, b))
          fail(no, "duplicate connection " + a + " - " + b);
        spec.connections.emplace_back(a, b);
        break;
      }
      case FORWARDING: {
        std::size_t i = 0;
        while (i < toks.size()) {
          if (i + 3 >= toks.size() || toks[i + 1].text != "(" ||
              toks[i + 3].text != ")")
            fail_at(toks[i], "expected 'x.fwd(y)'");
          const std::string& head = toks[i].text;
          const std::string suffix = ".fwd";
          if (head.size() <= suffix.size() ||
              head.compare(head.size() - suffix.size(), suffix.size(),
                           suffix) != 0)
            fail_at(toks[i], "expected 'x.fwd(y)'");
          std::string x = head.substr(0, head.size() - suffix.size());
          std::string y = toks[i + 2].text;
          for (const auto& s : {x, y})
            if (std::find(spec.switches.begin(), spec.switches.end(), s) ==
                spec.switches.end())
              fail_at(toks[i], "unknown switch '" + s + "'");
          if (!has_connection(spec, x, y))
            fail_at(toks[i], "rule " + x + ".fwd(" + y + ") has no connection");
          for (const auto& r : spec.forwarding)
            if (r.first == x)
              fail_at(toks[i], "switch '" + x + "' already has a rule");
          spec.forwarding.emplace_back(x, y);
          i += 4;
        }
        break;
      }
      case UPDATE:
        for (Tok& t : toks) update_toks.push_back(std::move(t));
        break;
      default:
        fail(no, "content outside any section");
    }
  }

  if (!seen[SWITCHES]) throw ParseError("missing [switches] section");

  if (!update_toks.empty() &&
      !(update_toks.size() == 1 && update_toks[0].text == "none")) {
    UpdateParser up{update_toks};
    UpdateExpr u = up.parse_expr();
    if (up.pos != update_toks.size())
      fail_at(update_toks[up.pos], "trailing input after update");
    validate_update(spec, u, update_line);
    spec.update = std::move(u);
  }
  return spec;
}

NetworkSpec load_network(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ParseError("cannot open '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  try {
    return parse_network(buf.str());
  } catch (const ParseError& e) {
    throw ParseError(path + ": " + e.what());
  }
}

std::string render_update(const UpdateExpr& u) {
  if (u.kind == UpdateExpr::Kind::Switch) {
    const SwitchUpdate& su = u.update;
    return "upd(" + su.sw + ".fwd(" + (su.next_new ? *su.next_new : "-") +
           "/" + (su.next_old ? *su.next_old : "-") + "))";
  }
  const char* sep = u.kind == UpdateExpr::Kind::Sequential ? " >> " : " || ";
  std::string out = "(";
  for (std::size_t i = 0; i < u.children.size(); ++i) {
    if (i) out += sep;
    out += render_update(u.children[i]);
  }
  return out + ")";
}

std::string serialize_network(const NetworkSpec& spec) {
  std::ostringstream out;
  out << "[switches]";
  for (const auto& s : spec.switches) out << ' ' << s;
  out << "\n[connections]\n";
  for (const auto& c : spec.connections)
    out << c.first << " - " << c.second << "\n";
  out << "[ingress]";
  for (const auto& s : spec.ingress) out << ' ' << s;
  out << "\n[egress]";
  for (const auto& s : spec.egress) out << ' ' << s;
  out << "\n[forwarding]\n";
  for (const auto& r : spec.forwarding)
    out << r.first << ".fwd(" << r.second << ")\n";
  if (spec.update) out << "[update]\n" << render_update(*spec.update) << "\n";
  return out.str();
}

std::vector<std::pair<std::string, std::string>> final_forwarding(
    const NetworkSpec& spec) {
  std::map<std::string, std::string> table;
  for (const auto& r : spec.forwarding) table[r.first] = r.second;
  if (spec.update) {
    check_parallel_disjoint(*spec.update);
    apply_update(*spec.update, table);
  }
  std::vector<std::pair<std::string, std::string>> out;
  for (const auto& s : spec.switches) {
    auto it = table.find(s);
    if (it != table.end()) out.emplace_back(it->first, it->second);
  }
  return out;
}

namespace {

// Start/finish place names of every node of the update tree, numbered
// pre-order per node kind.
struct ControlPlan {
  const UpdateExpr* node;
  std::string start;
  std::string finish;
  std::vector<std::size_t> children;  // indices into the plan vector
};

std::size_t plan_control(const UpdateExpr& u, std::vector<ControlPlan>& plan,
                         int counters[3]) {
  std::size_t self = plan.size();
  plan.push_back({&u, "", "", {}});
  std::string base;
  switch (u.kind) {
    case UpdateExpr::Kind::Switch:
      base = "upd" + std::to_string(counters[0]++);
      break;
    case UpdateExpr::Kind::Sequential:
      base = "seq" + std::to_string(counters[1]++);
      break;
    case UpdateExpr::Kind::Parallel:
      base = "par" + std::to_string(counters[2]++);
      break;
  }
  plan[self].start = base + "_s";
  plan[self].finish = base + "_f";
  if (u.kind != UpdateExpr::Kind::Switch) {
    for (const auto& c : u.children) {
      std::size_t ci = plan_control(c, plan, counters);
      plan[self].children.push_back(ci);
    }
  }
  return self;
}

}  // namespace

PetriNetWithTransits encode_network(const NetworkSpec& spec) {
  PetriNetWithTransits net;
  net.name = "sdn";

  for (const auto& s : spec.switches) net.add_place(s, true);

  auto rule_marked = [&](const std::string& x, const std::string& y) {
    for (const auto& r : spec.forwarding)
      if (r.first == x && r.second == y) return true;
    return false;
  };
  for (const auto& c : spec.connections) {
    net.add_place(c.first + ".fwd(" + c.second + ")",
                  rule_marked(c.first, c.second));
    net.add_place(c.second + ".fwd(" + c.first + ")",
                  rule_marked(c.second, c.first));
  }

  std::vector<ControlPlan> plan;
  if (spec.update) {
    int counters[3] = {0, 0, 0};
    plan_control(*spec.update, plan, counters);
    for (const auto& cp : plan) {
      net.add_place(cp.start);
      net.add_place(cp.finish);
    }
    net.mark_initially(*net.find_place(plan.front().start));
  }

  auto place = [&](const std::string& name) { return *net.find_place(name); };

  for (const auto& s : spec.ingress) {
    NodeId t = net.add_transition("i_" + s);
    NodeId p = place(s);
    net.add_arc_pt(p, t);
    net.add_arc_tp(t, p);
    net.add_transit(t, std::nullopt, p);
    net.add_transit(t, p, p);
  }

  for (const auto& c : spec.connections) {
    for (const auto& [x, y] :
         {std::pair(c.first, c.second), std::pair(c.second, c.first)}) {
      NodeId t = net.add_transition("(" + x + "," + y + ")");
      NodeId px = place(x), py = place(y);
      NodeId rule = place(x + ".fwd(" + y + ")");
      for (NodeId p : {px, py, rule}) {
        net.add_arc_pt(p, t);
        net.add_arc_tp(t, p);
      }
      net.add_transit(t, px, py);
      net.add_transit(t, py, py);
    }
  }

  for (const auto& cp : plan) {
    const UpdateExpr& u = *cp.node;
    // plan names end in "_s"/"_f"; the transition name is the bare base
    std::string base = cp.start.substr(0, cp.start.size() - 2);
    switch (u.kind) {
      case UpdateExpr::Kind::Switch: {
        NodeId t = net.add_transition(base);
        net.add_arc_pt(place(cp.start), t);
        net.add_arc_tp(t, place(cp.finish));
        if (u.update.next_old)
          net.add_arc_pt(place(u.update.sw + ".fwd(" + *u.update.next_old + ")"), t);
        if (u.update.next_new)
          net.add_arc_tp(t, place(u.update.sw + ".fwd(" + *u.update.next_new + ")"));
        break;
      }
      case UpdateExpr::Kind::Sequential: {
        std::size_t k = cp.children.size();
        for (std::size_t j = 0; j <= k; ++j) {
          NodeId t = net.add_transition(base + "_" + std::to_string(j));
          const std::string& from =
              j == 0 ? cp.start : plan[cp.children[j - 1]].finish;
          const std::string& to =
              j == k ? cp.finish : plan[cp.children[j]].start;
          net.add_arc_pt(place(from), t);
          net.add_arc_tp(t, place(to));
        }
        break;
      }
      case UpdateExpr::Kind::Parallel: {
        NodeId fork = net.add_transition(base + "_o");
        net.add_arc_pt(place(cp.start), fork);
        for (std::size_t ci : cp.children)
          net.add_arc_tp(fork, place(plan[ci].start));
        NodeId join = net.add_transition(base + "_c");
        for (std::size_t ci : cp.children)
          net.add_arc_pt(place(plan[ci].finish), join);
        net.add_arc_tp(join, place(cp.finish));
        break;
      }
    }
  }
  return net;
}

FormulaId fairness_assumption(FormulaArena& a, const PetriNet& net) {
  std::vector<FormulaId> conj;
  for (NodeId t = 0; t < net.num_transitions(); ++t) {
    std::vector<FormulaId> pre;
    for (NodeId p : net.transition(t).preset)
      pre.push_back(a.place_atom(net, p));
    conj.push_back(a.f_imp(a.f_eventually(a.f_always(a.and_all(pre))),
                           a.f_always(a.f_eventually(a.transition_atom(net, t)))));
  }
  return a.and_all(conj);
}

std::optional<PropertyKind> property_kind_from_name(const std::string& name) {
  if (name == "connectivity") return PropertyKind::Connectivity;
  if (name == "coherence") return PropertyKind::PacketCoherence;
  if (name == "drop") return PropertyKind::DropFreedom;
  if (name == "loop") return PropertyKind::LoopFreedom;
  return std::nullopt;
}

const char* property_name(PropertyKind kind) {
  switch (kind) {
    case PropertyKind::Connectivity: return "connectivity";
    case PropertyKind::PacketCoherence: return "coherence";
    case PropertyKind::DropFreedom: return "drop";
    case PropertyKind::LoopFreedom: return "loop";
  }
  return "?";
}

namespace {

// Switches reachable from any ingress by following the given table.
std::vector<std::string> reachable_switches(
    const NetworkSpec& spec,
    const std::vector<std::pair<std::string, std::string>>& table) {
  std::set<std::string> seen(spec.ingress.begin(), spec.ingress.end());
  bool changed = true;
  while (changed) {
    changed = false;
    for (const auto& r : table)
      if (seen.count(r.first) && seen.insert(r.second).second) changed = true;
  }
  std::vector<std::string> out;
  for (const auto& s : spec.switches)
    if (seen.count(s)) out.push_back(s);
  return out;
}

}  // namespace

FormulaId property_formula(FormulaArena& a, const NetworkSpec& spec,
                           const PetriNetWithTransits& encoded,
                           PropertyKind kind, bool assume_fairness) {
  auto sw_atom = [&](const std::string& s) {
    return a.place_atom(encoded, *encoded.find_place(s));
  };
  auto is_egress = [&](const std::string& s) {
    return std::find(spec.egress.begin(), spec.egress.end(), s) !=
           spec.egress.end();
  };

  FormulaId body = kNoFormula;
  switch (kind) {
    case PropertyKind::Connectivity: {
      std::vector<FormulaId> eg;
      for (const auto& s : spec.egress) eg.push_back(sw_atom(s));
      body = a.f_eventually(a.or_all(eg));
      break;
    }
    case PropertyKind::PacketCoherence: {
      std::vector<FormulaId> init, fin;
      for (const auto& s : reachable_switches(spec, spec.forwarding))
        init.push_back(sw_atom(s));
      for (const auto& s : reachable_switches(spec, final_forwarding(spec)))
        fin.push_back(sw_atom(s));
      body = a.f_or(a.f_always(a.or_all(init)), a.f_always(a.or_all(fin)));
      break;
    }
    case PropertyKind::DropFreedom: {
      std::vector<FormulaId> not_eg, moves;
      for (const auto& s : spec.egress) not_eg.push_back(a.f_not(sw_atom(s)));
      for (const auto& c : spec.connections)
        for (const auto& [x, y] :
             {std::pair(c.first, c.second), std::pair(c.second, c.first)}) {
          NodeId t = *encoded.find_transition("(" + x + "," + y + ")");
          moves.push_back(a.transition_atom(encoded, t));
        }
      body = a.f_always(a.f_imp(a.and_all(not_eg), a.or_all(moves)));
      break;
    }
    case PropertyKind::LoopFreedom: {
      std::vector<FormulaId> conj;
      for (const auto& s : spec.switches) {
        if (is_egress(s)) continue;
        FormulaId at = sw_atom(s);
        conj.push_back(
            a.f_imp(at, a.f_until(at, a.f_always(a.f_not(at)))));
      }
      body = a.f_always(a.and_all(conj));
      break;
    }
  }

  FormulaId prop = a.f_flowsub(1, body);
  if (assume_fairness)
    prop = a.f_imp(fairness_assumption(a, encoded), prop);
  return prop;
}

}  // namespace transitmc
