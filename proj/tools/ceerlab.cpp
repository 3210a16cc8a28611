// Command-line entry point. Exit codes: 0 success, 1 a verification or
// expectation failed, 2 usage error (bad flags, unreadable or malformed
// input).
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "ceerlab/construction.hpp"
#include "ceerlab/degree_probe.hpp"
#include "ceerlab/formula.hpp"
#include "ceerlab/interpretation.hpp"
#include "ceerlab/json_io.hpp"
#include "ceerlab/model_check.hpp"
#include "ceerlab/names.hpp"
#include "ceerlab/verify.hpp"

using namespace ceerlab;
using nlohmann::json;

namespace {

constexpr int kOk = 0, kFailed = 1, kUsage = 2;

// Thrown for problems that are the caller's fault.
struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

void emit(const std::string& out, const std::string& text) {
  if (out.empty() || out == "-") {
    std::cout << text;
  } else {
    io::write_text_file(out, text);
  }
}

Edge parse_pair(const std::string& s) {
  auto comma = s.find(',');
  if (comma == std::string::npos) throw UsageError("expected a pair x,y but got '" + s + "'");
  try {
    return {std::stoull(s.substr(0, comma)), std::stoull(s.substr(comma + 1))};
  } catch (const std::exception&) {
    throw UsageError("expected a pair x,y but got '" + s + "'");
  }
}

std::pair<std::string, std::string> split_at(const std::string& s, char sep) {
  auto k = s.find(sep);
  if (k == std::string::npos) throw UsageError("expected '" + std::string(1, sep) + "' in '" + s + "'");
  return {s.substr(0, k), s.substr(k + 1)};
}

// ---- construct / decode --------------------------------------------------

struct ConstructArgs {
  std::string graph, family = "id", ws, out, quotient;
  Stage stages = 500;
  bool full = false;
  Nat universe = 4096;
};

int cmd_construct(const ConstructArgs& a) {
  auto g = io::load_graph(a.graph);
  std::vector<CeSet> ws;
  if (!a.ws.empty()) ws = io::ws_from_json(io::read_json_file(a.ws));
  construction::Config cfg;
  cfg.finite_mode = !a.full;
  cfg.universe = a.universe;
  if (!a.quotient.empty()) cfg.quotient_pair = parse_pair(a.quotient);
  if (cfg.finite_mode && !ws.empty()) std::cerr << "note: W scripts are ignored in finite mode (pass --full)\n";
  auto res = construction::run(construction::GraphInput::from_finite(g), construction::make_family(a.family),
                               cfg.finite_mode ? std::vector<CeSet>{} : ws, a.stages, cfg);
  emit(a.out, io::run_to_json(res, a.stages, g.size()).dump(1) + "\n");
  if (!cfg.finite_mode && !ws.empty()) {
    auto rep = construction::verify_dark_satisfaction(res.trace, ws, ws.size());
    for (const auto& v : rep.violations) std::cerr << "violation: " << v << '\n';
    if (!rep.ok()) return kFailed;
  }
  return kOk;
}

int cmd_decode(const std::string& trace, const std::string& out, bool dot) {
  auto j = io::read_json_file(trace);
  if (!j.contains("construction")) throw UsageError(trace + " is not a construct output");
  const auto& c = j["construction"];
  auto state = io::state_from_json(c.at("final"));
  FiniteGraph g;
  try {
    g = construction::decode_layout_graph(state, c.at("vertices").get<Nat>(), c.at("stages_run").get<Stage>());
  } catch (const std::runtime_error& e) {
    std::cerr << "decode: " << e.what() << '\n';
    return kFailed;
  }
  emit(out, dot ? io::to_dot(g) : io::to_json(g).dump(1) + "\n");
  return kOk;
}

// ---- formulas ------------------------------------------------------------

struct TranslateArgs {
  std::string from = "arith", to = "poset", mode = "ni", code = "w", formula;
  bool light = false;
};

int cmd_translate(const TranslateArgs& a) {
  auto f = logic::parse(a.formula);
  if (a.from != "arith" && a.from != "graph") throw UsageError("--from must be arith or graph");
  if (a.to != "graph" && a.to != "poset") throw UsageError("--to must be graph or poset");
  if (a.from == "graph" && a.to == "graph") throw UsageError("nothing to translate");
  if (a.from == "arith") f = interp::arith_to_graph(f);
  if (a.to == "poset") {
    interp::Coding coding;
    coding.mode = a.mode == "v" ? interp::VertexMode::V : interp::VertexMode::NI;
    coding.light = a.light;
    f = interp::graph_to_poset(f, a.code, coding);
  }
  std::cout << logic::print(f) << '\n';
  return kOk;
}

struct LoadedStructure {
  FiniteGraph graph;
  FinitePoset poset;
  std::optional<logic::Structure> s;
};

void load_structure(const std::string& path, LoadedStructure& ls) {
  auto j = io::read_json_file(path);
  const auto kind = j.value("kind", std::string());
  if (kind == "graph") {
    ls.graph = io::graph_from_json(j);
    ls.s = logic::Structure::graph(ls.graph);
  } else if (kind == "poset") {
    ls.poset = io::poset_from_json(j);
    ls.s = logic::Structure::poset(ls.poset);
  } else if (kind == "arith") {
    ls.s = logic::Structure::arithmetic(j.at("n").get<std::size_t>());
  } else {
    throw UsageError(path + ": kind must be graph, poset or arith");
  }
}

int cmd_check(const std::string& structure, const std::string& formula, const std::vector<std::string>& assign,
              const std::string& expect) {
  LoadedStructure ls;
  load_structure(structure, ls);
  logic::Assignment a;
  for (const auto& kv : assign) {
    auto [var, elem] = split_at(kv, '=');
    a[var] = ls.s->element(elem);
  }
  const bool v = logic::model_check(logic::parse(formula), *ls.s, a);
  std::cout << (v ? "true" : "false") << '\n';
  if (!expect.empty() && (expect == "true") != v) return kFailed;
  return kOk;
}

int cmd_gadget(Nat n, const std::string& out, bool dot) {
  auto gg = interp::build_gadget_graph(n);
  if (dot) {
    emit(out, io::to_dot(gg.graph, "gadget"));
    return kOk;
  }
  auto j = io::to_json(gg.graph);
  j["n"] = n;
  json elems = json::array();
  for (auto v : gg.element) elems.push_back(gg.graph.name(v));
  j["elements"] = elems;
  emit(out, j.dump(1) + "\n");
  return kOk;
}

// ---- degree probe ----------------------------------------------------------

int cmd_fixture(const std::string& family, const std::string& out, bool list) {
  if (list) {
    for (const auto& f : probe::fixture_families()) std::cout << f << '\n';
    return kOk;
  }
  if (family.empty()) throw UsageError("--family is required");
  emit(out, probe::to_json(probe::build_fixture(family)).dump(1) + "\n");
  return kOk;
}

std::size_t element_or(const FinitePoset& p, const std::string& name, const std::map<std::string, std::string>& des,
                       const std::string& role) {
  if (!name.empty()) return p.at(name);
  auto it = des.find(role);
  if (it == des.end()) throw UsageError("pass --" + role + " (the poset names no '" + role + "')");
  return p.at(it->second);
}

int cmd_probe(const std::string& path, const std::string& op, const std::string& c_name, const std::string& id_name,
              bool strip) {
  auto j = io::read_json_file(path);
  probe::Fixture fx;
  if (j.contains("designated") || j.contains("expect")) {
    fx = probe::fixture_from_json(j);
  } else {
    fx.poset = io::poset_from_json(j);
  }
  const auto& p = fx.poset;
  json out;
  if (op == "minimal") {
    out = json::array();
    for (auto x : probe::minimal_elements(p)) out.push_back(p.name(x));
  } else if (op == "smc_pairs") {
    out = json::array();
    for (const auto& t : probe::smc_pairs(p)) out.push_back({p.name(t.cover), p.name(t.d), p.name(t.e)});
  } else if (op == "decode") {
    out = io::to_json(probe::decode_Gc(p, element_or(p, c_name, fx.designated, "c"), strip).graph);
  } else if (op == "names") {
    out = json::array();
    for (auto [x, y] : probe::name_pairs(p, element_or(p, c_name, fx.designated, "f")))
      out.push_back({p.name(x), p.name(y)});
  } else if (op == "light") {
    out = json::array();
    auto f = element_or(p, c_name, fx.designated, "f");
    for (auto [x, y] : probe::light_coded_pairs(p, f, element_or(p, id_name, fx.designated, "id")))
      out.push_back({p.name(x), p.name(y)});
  } else if (op == "check") {
    auto chk = probe::check_fixture(fx);
    for (const auto& l : chk.lines) std::cout << l << '\n';
    for (const auto& m : chk.mismatches) std::cout << "MISMATCH " << m << '\n';
    return chk.ok() ? kOk : kFailed;
  } else {
    throw UsageError("unknown --op " + op);
  }
  std::cout << out.dump() << '\n';
  return kOk;
}

// ---- names -----------------------------------------------------------------

int cmd_name(const std::vector<std::string>& pairs, Nat universe, Stage stages, const std::string& quotient,
             const std::string& out) {
  names::PairSet f;
  for (const auto& s : pairs) {
    auto [x, y] = split_at(s, ',');
    f.pairs.push_back({{x, identity_ceer(universe)}, {y, identity_ceer(universe)}});
  }
  Edge q{0, 1};
  if (!quotient.empty()) q = parse_pair(quotient);
  auto name = names::build_name(f, names::default_fresh_supply(universe), q);
  auto j = io::to_json(name.ceer, stages);
  j["label_metadata"] = names::label_metadata(f, name);
  emit(out, j.dump(1) + "\n");
  return kOk;
}

// ---- verify / export -------------------------------------------------------

int cmd_verify(const std::string& suite, std::uint64_t seed, const std::string& out) {
  verify::Report rep;
  try {
    rep = verify::run_suite(suite, seed);
  } catch (const std::invalid_argument& e) {
    throw UsageError(e.what());
  }
  emit(out, rep.text());
  return rep.ok() ? kOk : kFailed;
}

int cmd_export_dot(const std::string& in, const std::string& out) {
  if (in.ends_with(".dot") || in.ends_with(".gv")) {
    emit(out, io::to_dot(io::load_graph(in)));
    return kOk;
  }
  auto j = io::read_json_file(in);
  const auto kind = j.value("kind", std::string());
  if (kind == "graph") {
    emit(out, io::to_dot(io::graph_from_json(j)));
  } else if (kind == "poset") {
    emit(out, io::to_dot(io::poset_from_json(j)));
  } else {
    throw UsageError(in + ": expected a graph or poset JSON file");
  }
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"ceerlab: coding graphs into ceers and reading them back"};
  app.require_subcommand(1);
  std::function<int()> action;

  ConstructArgs ca;
  auto* construct = app.add_subcommand("construct", "run the coding construction on a finite graph");
  construct->add_option("--graph", ca.graph, "graph file (JSON or DOT)")->required()->check(CLI::ExistingFile);
  construct->add_option("--family", ca.family, "generator family: id, idn:K, mod, random:SEED, file:PATH");
  construct->add_option("--ws", ca.ws, "W scripts (JSON)")->check(CLI::ExistingFile);
  construct->add_option("--stages", ca.stages, "number of stages")->check(CLI::PositiveNumber);
  construct->add_option("--out", ca.out, "trace output (default stdout)");
  construct->add_flag("--full", ca.full, "keep the Dark requirements (finite mode is the default)");
  construct->add_option("--quotient-pair", ca.quotient, "even,odd pair collapsed in edge columns");
  construct->add_option("--universe", ca.universe, "materialized elements of C")->check(CLI::PositiveNumber);
  construct->callback([&] { action = [&] { return cmd_construct(ca); }; });

  std::string dec_trace, dec_out;
  bool dec_dot = false;
  auto* decode = app.add_subcommand("decode", "read the coded graph off a construct trace");
  decode->add_option("--trace", dec_trace)->required()->check(CLI::ExistingFile);
  decode->add_option("--out", dec_out);
  decode->add_flag("--dot", dec_dot, "write DOT instead of JSON");
  decode->callback([&] { action = [&] { return cmd_decode(dec_trace, dec_out, dec_dot); }; });

  TranslateArgs ta;
  auto* translate = app.add_subcommand("translate", "translate an arithmetic or graph formula");
  translate->add_option("--from", ta.from)->check(CLI::IsMember({"arith", "graph"}));
  translate->add_option("--to", ta.to)->check(CLI::IsMember({"graph", "poset"}));
  translate->add_option("--mode", ta.mode, "vertex reading in the poset")->check(CLI::IsMember({"ni", "v"}));
  translate->add_option("--code", ta.code, "name of the code variable");
  translate->add_flag("--light", ta.light, "use the light reading above Id");
  translate->add_option("formula", ta.formula)->required();
  translate->callback([&] { action = [&] { return cmd_translate(ta); }; });

  std::string ck_structure, ck_formula, ck_expect;
  std::vector<std::string> ck_assign;
  auto* check = app.add_subcommand("check", "model-check a formula on a finite structure");
  check->add_option("--structure", ck_structure)->required()->check(CLI::ExistingFile);
  check->add_option("--formula", ck_formula)->required();
  check->add_option("--assign", ck_assign, "var=element for free variables");
  check->add_option("--expect", ck_expect, "exit 1 unless the value matches")->check(CLI::IsMember({"true", "false"}));
  check->callback([&] { action = [&] { return cmd_check(ck_structure, ck_formula, ck_assign, ck_expect); }; });

  Nat gd_n = 0;
  std::string gd_out;
  bool gd_dot = false;
  auto* gadget = app.add_subcommand("gadget", "build the arithmetic gadget graph on 0..N");
  gadget->add_option("--n", gd_n)->required()->check(CLI::PositiveNumber);
  gadget->add_option("--out", gd_out);
  gadget->add_flag("--dot", gd_dot);
  gadget->callback([&] { action = [&] { return cmd_gadget(gd_n, gd_out, gd_dot); }; });

  std::string fx_family, fx_out;
  bool fx_list = false;
  auto* fixture = app.add_subcommand("fixture", "write a packaged poset fixture");
  fixture->add_option("--family", fx_family);
  fixture->add_option("--out", fx_out);
  fixture->add_flag("--list", fx_list, "list the families");
  fixture->callback([&] { action = [&] { return cmd_fixture(fx_family, fx_out, fx_list); }; });

  std::string pr_poset, pr_op, pr_c, pr_id;
  bool pr_strip = false;
  auto* probe_cmd = app.add_subcommand("probe", "scan a finite poset");
  probe_cmd->add_option("--poset", pr_poset)->required()->check(CLI::ExistingFile);
  probe_cmd->add_option("--op", pr_op)->required()->check(
      CLI::IsMember({"minimal", "smc_pairs", "decode", "names", "light", "check"}));
  probe_cmd->add_option("--c", pr_c, "code (decode) or name (names, light) element");
  probe_cmd->add_option("--id", pr_id, "degree of Id for light");
  probe_cmd->add_flag("--strip", pr_strip, "drop isolated vertices when decoding");
  probe_cmd->callback([&] { action = [&] { return cmd_probe(pr_poset, pr_op, pr_c, pr_id, pr_strip); }; });

  std::vector<std::string> nm_pairs;
  Nat nm_universe = 16;
  Stage nm_stages = 1;
  std::string nm_quotient, nm_out;
  auto* name = app.add_subcommand("name", "build a name for pairs of identity ceers, with label metadata");
  name->add_option("--pair", nm_pairs, "x,y ids")->required();
  name->add_option("--universe", nm_universe)->check(CLI::PositiveNumber);
  name->add_option("--stages", nm_stages)->check(CLI::PositiveNumber);
  name->add_option("--quotient-pair", nm_quotient);
  name->add_option("--out", nm_out);
  name->callback([&] { action = [&] { return cmd_name(nm_pairs, nm_universe, nm_stages, nm_quotient, nm_out); }; });

  std::string vf_suite = "all", vf_out;
  std::uint64_t vf_seed = 1;
  auto* verify_cmd = app.add_subcommand("verify", "run a property suite and print a report");
  verify_cmd->add_option("--suite", vf_suite)->check(CLI::IsMember(verify::suite_names()));
  verify_cmd->add_option("--seed", vf_seed);
  verify_cmd->add_option("--out", vf_out);
  verify_cmd->callback([&] { action = [&] { return cmd_verify(vf_suite, vf_seed, vf_out); }; });

  std::string ed_in, ed_out;
  auto* export_dot = app.add_subcommand("export-dot", "convert a graph or poset file to DOT");
  export_dot->add_option("--input", ed_in)->required()->check(CLI::ExistingFile);
  export_dot->add_option("--out", ed_out);
  export_dot->callback([&] { action = [&] { return cmd_export_dot(ed_in, ed_out); }; });

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kUsage;
  }
  try {
    return action();
  } catch (const UsageError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kUsage;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kUsage;
  } catch (const json::exception& e) {
    std::cerr << "error: malformed JSON: " << e.what() << '\n';
    return kUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kUsage;
  }
}
