#include <chrono>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "transitmc/dot.hpp"
#include "transitmc/json_out.hpp"
#include "transitmc/ltl_parse.hpp"
#include "transitmc/net_format.hpp"
#include "transitmc/oracle.hpp"
#include "transitmc/pipeline.hpp"
#include "transitmc/sdn.hpp"

namespace {

using namespace transitmc;

struct Options {
  std::string approach = "parallel";
  std::size_t max_states = 1000000;
  std::string output = "text";
  std::string dot_path;

  std::string input;
  std::string formula;
  std::string property;
  bool assume_fairness = false;
  std::size_t bound = 8;
};

std::string marking_text(const PetriNet& net, const Marking& m) {
  std::string out = "{";
  bool first = true;
  for (NodeId p = 0; p < net.num_places(); ++p) {
    if (!m.test(p)) continue;
    if (!first) out += ", ";
    out += net.place_name(p);
    first = false;
  }
  return out + "}";
}

void print_steps(const PetriNet& net, const std::vector<Step>& steps) {
  for (const Step& s : steps) {
    std::cout << "    " << marking_text(net, s.marking) << "  --"
              << (s.fired ? net.transition_name(*s.fired) : "(stutter)")
              << "-->\n";
  }
}

void print_text(const PetriNet& net, const PipelineResult& res,
                long long time_ms) {
  std::cout << "verdict: "
            << (res.verdict == VerdictKind::Holds        ? "HOLDS"
                : res.verdict == VerdictKind::Violated   ? "VIOLATED"
                                                         : "BOUNDED_HOLDS")
            << "\n";
  std::cout << "reachable states: " << res.stats.reachable_states << "\n";
  std::cout << "buchi states: " << res.stats.buchi_states << "\n";
  std::cout << "product states: " << res.stats.product_states << "\n";
  if (res.n > 0 || res.reduced_places > 0) {
    std::cout << "flow subformulas: " << res.n << "\n";
    std::cout << "reduced places: " << res.reduced_places << "\n";
    std::cout << "reduced transitions: " << res.reduced_transitions << "\n";
  }
  std::cout << "time: " << time_ms << " ms\n";
  if (!res.counterexample) return;
  const MappedCounterexample& cex = *res.counterexample;
  std::cout << "counterexample:\n  prefix:\n";
  print_steps(net, cex.lasso.prefix);
  std::cout << "  loop:\n";
  print_steps(net, cex.lasso.loop);
  for (std::size_t i = 0; i < cex.chains.size(); ++i) {
    const WitnessChain& c = cex.chains[i];
    std::cout << "  chain " << (i + 1) << ": ";
    if (!c.tracked) {
      std::cout << "(no chain tracked)\n";
      continue;
    }
    for (std::size_t k = 0; k < c.places.size(); ++k) {
      if (k) std::cout << " --" << net.transition_name(c.movers[k - 1]) << "--> ";
      std::cout << net.place_name(c.places[k]);
    }
    if (c.loop_start)
      std::cout << "  (loops from place " << (*c.loop_start + 1) << ")";
    else
      std::cout << "  (then stutters)";
    std::cout << "\n";
  }
}

int finish(const PetriNet& net, PipelineResult res, const Options& opt,
           const std::string& command, const std::string& formula_text,
           std::chrono::steady_clock::time_point start) {
  auto elapsed = std::chrono::duration_cast<std::chrono::milliseconds>(
                     std::chrono::steady_clock::now() - start)
                     .count();
  if (opt.output == "json") {
    nlohmann::json out = json_result(net, res);
    out["command"] = command;
    out["input"] = opt.input;
    out["formula"] = formula_text;
    out["approach"] = opt.approach;
    out["stats"]["time_ms"] = elapsed;
    std::cout << out.dump(2) << "\n";
  } else {
    std::cout << "formula: " << formula_text << "\n";
    print_text(net, res, elapsed);
  }
  return res.verdict == VerdictKind::Violated ? 1 : 0;
}

FormulaId parse_and_resolve(FormulaArena& a, const std::string& text,
                            const PetriNet& net) {
  return resolve_atoms(a, parse_flow_ltl(a, text), net);
}

int run_check_pnwt(const Options& opt) {
  auto start = std::chrono::steady_clock::now();
  PetriNetWithTransits net = load_net(opt.input);
  if (!opt.dot_path.empty()) write_file(opt.dot_path, dot_net(net));
  FormulaArena a;
  FormulaId f = parse_and_resolve(a, opt.formula, net);
  PipelineResult res = check_pnwt(a, net, f, opt.max_states);
  return finish(net, std::move(res), opt, "check-pnwt", render(a, f), start);
}

int run_check_ltl(const Options& opt) {
  auto start = std::chrono::steady_clock::now();
  PetriNetWithTransits net = load_net(opt.input);
  if (!opt.dot_path.empty()) write_file(opt.dot_path, dot_net(net));
  FormulaArena a;
  FormulaId f = parse_and_resolve(a, opt.formula, net);
  PipelineResult res = check_ltl_direct(a, net, f, opt.max_states);
  return finish(net, std::move(res), opt, "check-ltl", render(a, f), start);
}

int run_check_sdn(const Options& opt) {
  auto start = std::chrono::steady_clock::now();
  NetworkSpec spec = load_network(opt.input);
  PetriNetWithTransits net = encode_network(spec);
  if (!opt.dot_path.empty()) write_file(opt.dot_path, dot_net(net));
  FormulaArena a;
  FormulaId f;
  if (!opt.property.empty()) {
    auto kind = property_kind_from_name(opt.property);
    if (!kind)
      throw ParseError("unknown property '" + opt.property +
                       "' (connectivity, coherence, drop, loop)");
    f = property_formula(a, spec, net, *kind, opt.assume_fairness);
  } else {
    f = parse_and_resolve(a, opt.formula, net);
    if (opt.assume_fairness) f = a.f_imp(fairness_assumption(a, net), f);
  }
  PipelineResult res = check_pnwt(a, net, f, opt.max_states);
  if (opt.output == "text") {
    std::cout << "encoded net: " << net.num_places() << " places, "
              << net.num_transitions() << " transitions\n";
    std::cout << "final table:";
    for (const auto& r : final_forwarding(spec))
      std::cout << ' ' << r.first << ".fwd(" << r.second << ")";
    std::cout << "\n";
  }
  return finish(net, std::move(res), opt, "check-sdn", render(a, f), start);
}

int run_reduce(const Options& opt) {
  PetriNetWithTransits net = load_net(opt.input);
  FormulaArena a;
  FormulaId f = parse_and_resolve(a, opt.formula, net);
  auto n = static_cast<std::uint32_t>(flow_subformulas(a, f).size());
  ReducedProblem reduced = reduce_net(net, n);
  FormulaId ltl = reduce_formula(a, net, f, reduced);
  if (!opt.dot_path.empty()) write_file(opt.dot_path, dot_net(reduced.net));
  if (opt.output == "json") {
    nlohmann::json out;
    out["command"] = "reduce";
    out["input"] = opt.input;
    out["net"] = serialize_net(reduced.net);
    out["formula"] = render(a, ltl);
    out["places"] = reduced.net.num_places();
    out["transitions"] = reduced.net.num_transitions();
    std::cout << out.dump(2) << "\n";
  } else {
    std::cout << serialize_net(reduced.net);
    std::cout << "[formula]\n" << render(a, ltl) << "\n";
  }
  return 0;
}

int run_oracle_check(const Options& opt) {
  auto start = std::chrono::steady_clock::now();
  PetriNetWithTransits net = load_net(opt.input);
  if (!opt.dot_path.empty()) write_file(opt.dot_path, dot_net(net));
  FormulaArena a;
  FormulaId f = parse_and_resolve(a, opt.formula, net);
  Verdict v = brute_force_check(a, net, f, opt.bound, opt.max_states);
  PipelineResult res;
  res.verdict = v.kind;
  res.stats = v.stats;
  if (v.counterexample)
    res.counterexample = MappedCounterexample{std::move(*v.counterexample), {}};
  return finish(net, std::move(res), opt, "oracle-check", render(a, f), start);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"model checker for safe Petri nets with transits and Flow-LTL"};
  app.require_subcommand(1);
  app.fallthrough();

  Options opt;
  app.add_option("--approach", opt.approach, "reduction approach")
      ->check(CLI::IsMember({"parallel", "sequential"}))
      ->capture_default_str();
  app.add_option("--max-states", opt.max_states, "state budget")
      ->capture_default_str();
  app.add_option("--output", opt.output, "result format")
      ->check(CLI::IsMember({"text", "json"}))
      ->capture_default_str();
  app.add_option("--dot", opt.dot_path, "write the checked net as DOT");

  auto* pnwt = app.add_subcommand(
      "check-pnwt", "check a Petri net with transits against Flow-LTL");
  pnwt->add_option("net", opt.input, "net file")->required();
  pnwt->add_option("--formula", opt.formula, "Flow-LTL formula")->required();

  auto* sdn = app.add_subcommand(
      "check-sdn", "check a network update against a routing property");
  sdn->add_option("spec", opt.input, "network spec file")->required();
  auto* sdn_prop = sdn->add_option(
      "--property", opt.property, "connectivity, coherence, drop or loop");
  auto* sdn_formula =
      sdn->add_option("--formula", opt.formula, "Flow-LTL formula");
  sdn_prop->excludes(sdn_formula);
  sdn->add_flag("--assume-fairness", opt.assume_fairness,
                "premise: weak fairness for every transition");

  auto* ltl = app.add_subcommand("check-ltl", "check a Petri net against LTL");
  ltl->add_option("net", opt.input, "net file")->required();
  ltl->add_option("--formula", opt.formula, "LTL formula")->required();

  auto* red = app.add_subcommand(
      "reduce", "emit the reduced net and LTL formula without checking");
  red->add_option("net", opt.input, "net file")->required();
  red->add_option("--formula", opt.formula, "Flow-LTL formula")->required();

  auto* ora = app.add_subcommand(
      "oracle-check", "bounded lasso enumeration (testing aid)");
  ora->add_option("net", opt.input, "net file")->required();
  ora->add_option("--formula", opt.formula, "Flow-LTL formula")->required();
  ora->add_option("--bound", opt.bound, "max prefix+loop length")
      ->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  if (opt.approach == "sequential") {
    std::cerr << "the sequential approach is not supported; "
                 "use --approach parallel\n";
    return 2;
  }
  if (sdn->parsed() && opt.property.empty() && opt.formula.empty()) {
    std::cerr << "check-sdn needs --property or --formula\n";
    return 2;
  }

  try {
    if (pnwt->parsed()) return run_check_pnwt(opt);
    if (sdn->parsed()) return run_check_sdn(opt);
    if (ltl->parsed()) return run_check_ltl(opt);
    if (red->parsed()) return run_reduce(opt);
    if (ora->parsed()) return run_oracle_check(opt);
  } catch (const SafenessError& e) {
    std::cerr << e.what() << "\n";
    return 2;
  } catch (const BudgetError& e) {
    std::cerr << e.what() << "\n";
    return 3;
  } catch (const ParseError& e) {
    std::cerr << e.what() << "\n";
    return 2;
  } catch (const NetError& e) {
    std::cerr << e.what() << "\n";
    return 2;
  }
  return 2;
}
