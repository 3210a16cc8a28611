#include "ceerlab/interpretation.hpp"

#include <functional>
#include <stdexcept>
#include <unordered_map>

namespace ceerlab::interp {

using namespace logic;

F Macro::operator()(const std::vector<std::string>& args) const {
  if (args.size() != params.size())
    throw std::invalid_argument(name + " expects " + std::to_string(params.size()) + " arguments");
  std::map<std::string, std::string> ren;
  for (std::size_t k = 0; k < args.size(); ++k) ren[params[k]] = args[k];
  return instantiate(body, ren);
}

namespace {

Macro macro(std::string name, std::vector<std::string> params, F body) {
  auto fv = free_vars(body);
  for (const auto& p : params) fv.erase(p);
  if (!fv.empty()) throw std::logic_error("macro " + name + " has stray free variable " + *fv.begin());
  return Macro{std::move(name), std::move(params), std::move(body)};
}

F distinct(const std::vector<std::string>& vs) {
  std::vector<F> parts;
  for (std::size_t a = 0; a < vs.size(); ++a)
    for (std::size_t b = a + 1; b < vs.size(); ++b) parts.push_back(neg(eq(vs[a], vs[b])));
  return conj(std::move(parts));
}

}  // namespace

// ---- gadget graph ---------------------------------------------------------

GadgetGraph build_gadget_graph(Nat n_max) {
  if (n_max < 1) throw std::invalid_argument("gadget fragment needs N >= 1");
  GadgetGraph gg;
  gg.n_max = n_max;
  auto& g = gg.graph;
  for (Nat k = 0; k <= n_max; ++k) gg.element.push_back(g.add_vertex("e" + std::to_string(k)));

  auto add_hub = [&](char op, Nat a, Nat b, Nat c) {
    const std::string base = std::string(op == '+' ? "p" : "m") + "_" + std::to_string(a) + "_" +
                             std::to_string(b) + "_" + std::to_string(c);
    const std::size_t h = g.add_vertex(base);
    gg.hubs.push_back({op, a, b, c, h});
    const int leaves = op == '+' ? 2 : 3;
    for (int l = 0; l < leaves; ++l) g.add_edge(h, g.add_vertex(base + ".leaf" + std::to_string(l)));
    const Nat target[3] = {a, b, c};
    for (int k = 0; k < 3; ++k) {
      // argument k sits at distance k + 2 from the hub
      std::size_t prev = h;
      for (int step = 1; step <= k + 1; ++step) {
        std::size_t mid = g.add_vertex(base + ".arg" + std::to_string(k + 1) + "." + std::to_string(step));
        g.add_edge(prev, mid);
        prev = mid;
      }
      g.add_edge(prev, gg.element[target[k]]);
    }
  };
  for (Nat a = 0; a <= n_max; ++a)
    for (Nat b = 0; a + b <= n_max; ++b) add_hub('+', a, b, a + b);
  for (Nat a = 0; a <= n_max; ++a)
    for (Nat b = 0; b <= n_max; ++b)
      if (a * b <= n_max) add_hub('*', a, b, a * b);
  return gg;
}

// ---- graph formulas -------------------------------------------------------

namespace {
// Everything except zero, le and succ, which go through arith_to_graph.
GraphFormulas build_core() {
  GraphFormulas d;
  d.leaf = macro("Leaf", {"x"}, exists("u", conj({edge("x", "u"), forall("v", implies(edge("x", "v"), eq("v", "u")))})));
  d.hub = macro("Hub", {"x"}, exists("u", conj({edge("x", "u"), d.leaf({"u"})})));
  // "no three distinct neighbours" fails fast on the high-degree element
  // vertices, where "every neighbour is u or v" would try every pair
  d.mid = macro("Mid", {"x"},
                conj({neg(exists_vars({"u", "v", "t"}, conj({edge("x", "u"), edge("x", "v"), edge("x", "t"),
                                                             distinct({"u", "v", "t"})}))),
                      exists_vars({"u", "v"}, conj({edge("x", "u"), edge("x", "v"), neg(eq("u", "v"))})),
                      neg(d.leaf({"x"})), neg(d.hub({"x"}))}));
  d.universe = macro("U", {"x"},
                     conj({neg(d.leaf({"x"})), neg(d.hub({"x"})), neg(d.mid({"x"})), exists("u", edge("x", "u")),
                           forall("u", implies(edge("x", "u"), d.mid({"u"})))}));
  // Each leaf is tested as soon as it is chosen, so a vertex without leaf
  // neighbours fails after one scan of its neighbourhood.
  auto leaf_count = [&](const std::string& name, int k) {
    std::vector<std::string> ls;
    for (int j = 0; j < k; ++j) ls.push_back("l" + std::to_string(j));
    std::vector<F> alts;
    for (const auto& l : ls) alts.push_back(eq("t", l));
    F body = forall("t", implies(conj({edge("h", "t"), d.leaf({"t"})}), disj(alts)));
    for (int j = k - 1; j >= 0; --j) {
      std::vector<F> parts{edge("h", ls[j]), d.leaf({ls[j]})};
      for (int i = 0; i < j; ++i) parts.push_back(neg(eq(ls[i], ls[j])));
      parts.push_back(body);
      body = exists(ls[j], conj(parts));
    }
    return macro(name, {"h"}, body);
  };
  d.plus_hub = leaf_count("PlusHub", 2);
  d.times_hub = leaf_count("TimesHub", 3);

  // h - m1 - ... - mk - x with every mj of degree two
  auto arg = [&](const std::string& name, int k) {
    std::vector<std::string> ms;
    for (int j = 1; j <= k; ++j) ms.push_back("m" + std::to_string(j));
    F inner = conj({edge(ms.back(), "x"), d.universe({"x"})});
    for (int j = k - 1; j >= 0; --j) {
      const std::string prev = j == 0 ? "h" : ms[j - 1];
      std::vector<F> parts{edge(prev, ms[j]), d.mid({ms[j]})};
      if (j >= 2) parts.push_back(neg(eq(ms[j], ms[j - 2])));
      parts.push_back(inner);
      inner = exists(ms[j], conj(parts));
    }
    return macro(name, {"h", "x"}, inner);
  };
  d.arg1 = arg("Arg1", 1);
  d.arg2 = arg("Arg2", 2);
  d.arg3 = arg("Arg3", 3);

  // exists h (Hub(h) & Arg1(h, x) & ...), with h reached through the
  // neighbour of x that Arg1 needs anyway, so the search stays local.
  auto op = [&](const std::string& name, const Macro& kind) {
    F hub = exists("h", conj({edge("a1", "h"), kind({"h"}), d.arg1({"h", "x"}), d.arg2({"h", "y"}),
                              d.arg3({"h", "z"})}));
    return macro(name, {"x", "y", "z"},
                 conj({d.universe({"x"}), d.universe({"y"}), d.universe({"z"}),
                       exists("a1", conj({edge("x", "a1"), hub}))}));
  };
  d.phi_plus = op("phi_plus", d.plus_hub);
  d.phi_times = op("phi_times", d.times_hub);
  return d;
}

const GraphFormulas& core() {
  static const GraphFormulas d = build_core();
  return d;
}
}  // namespace

GraphFormulas defining_formulas() {
  GraphFormulas d = build_core();
  const ArithFormulas a = arith_formulas();
  d.zero = macro("zero", {"x"}, conj({d.universe({"x"}), d.phi_plus({"x", "x", "x"})}));
  d.le = macro("le", {"x", "y"}, conj({d.universe({"x"}), d.universe({"y"}), arith_to_graph(a.le.body)}));
  d.succ = macro("succ", {"x", "y"}, conj({d.universe({"x"}), d.universe({"y"}), arith_to_graph(a.succ.body)}));
  return d;
}

// ---- arithmetic sugar -----------------------------------------------------

ArithFormulas arith_formulas() {
  ArithFormulas a;
  a.zero = macro("zero", {"x"}, plus("x", "x", "x"));
  a.one = macro("one", {"x"}, conj({times("x", "x", "x"), neg(plus("x", "x", "x"))}));
  a.le = macro("le", {"x", "y"}, exists("t", plus("x", "t", "y")));
  a.succ = macro("succ", {"x", "y"},
                 conj({a.le({"x", "y"}), neg(eq("x", "y")),
                       forall("s", implies(conj({a.le({"x", "s"}), neg(eq("s", "x"))}), a.le({"y", "s"})))}));
  return a;
}

F arith_numeral(Nat k, const std::string& x) {
  const ArithFormulas a = arith_formulas();
  if (k == 0) return a.zero({x});
  F body = a.one({"x"});
  for (Nat j = 2; j <= k; ++j) {
    body = exists("p", exists("o", conj({instantiate(body, {{"x", "p"}}), a.one({"o"}), plus("p", "o", "x")})));
  }
  return instantiate(body, {{"x", x}});
}

namespace {
F bounded(bool all, const std::string& x, Nat k, F body) {
  NameSupply ns;
  ns.reserve(body);
  ns.reserve(x);
  const std::string b = ns.fresh("bound");
  const std::string t = ns.fresh("gap");
  F guard = exists(b, conj({arith_numeral(k, b), exists(t, plus(x, t, b))}));
  return all ? forall(x, implies(guard, body)) : exists(x, conj({guard, body}));
}
}  // namespace

F bounded_forall(const std::string& x, Nat k, F body) { return bounded(true, x, k, std::move(body)); }
F bounded_exists(const std::string& x, Nat k, F body) { return bounded(false, x, k, std::move(body)); }

// ---- translations ---------------------------------------------------------

namespace {

// Translation is context-free, so shared subformulas are translated once.
struct Translator {
  std::function<F(const F&)> atom;
  std::function<F(const std::string&)> guard;
  std::unordered_map<const Formula*, F> memo;

  F run(const F& f) {
    auto it = memo.find(f.get());
    if (it != memo.end()) return it->second;
    F r = step(f);
    memo.emplace(f.get(), r);
    return r;
  }

  F step(const F& f) {
    switch (f->node) {
      case Node::True:
      case Node::False:
      case Node::Eq: return f;
      case Node::Leq:
      case Node::Edge:
      case Node::Plus:
      case Node::Times: return atom(f);
      case Node::Not: return neg(run(f->kids[0]));
      case Node::And:
      case Node::Or: {
        std::vector<F> kids;
        for (const auto& k : f->kids) kids.push_back(run(k));
        return f->node == Node::And ? conj(std::move(kids)) : disj(std::move(kids));
      }
      case Node::Implies: return implies(run(f->kids[0]), run(f->kids[1]));
      case Node::Forall: return forall(f->args[0], implies(guard(f->args[0]), run(f->kids[0])));
      case Node::Exists: return exists(f->args[0], conj({guard(f->args[0]), run(f->kids[0])}));
    }
    throw std::logic_error("unreachable");
  }
};

const PosetMacros& poset_defs() {
  static const PosetMacros m = poset_macros();
  return m;
}

}  // namespace

F arith_to_graph(const F& sigma) {
  const GraphFormulas& d = core();
  Translator t;
  t.atom = [&d](const F& a) -> F {
    if (a->node == Node::Plus) return d.phi_plus(a->args);
    if (a->node == Node::Times) return d.phi_times(a->args);
    throw std::invalid_argument("arith_to_graph: non-arithmetic atom in " + print(a));
  };
  t.guard = [&d](const std::string& v) { return d.universe({v}); };
  return t.run(sigma);
}

namespace {
void check_unused(const F& sigma, const std::string& name) {
  if (all_vars(sigma).count(name))
    throw std::invalid_argument("formula already uses the parameter name '" + name + "'");
}

F vertex_guard(const std::string& v, const std::string& w, const Coding& coding) {
  const PosetMacros& m = poset_defs();
  if (coding.light)
    return coding.mode == VertexMode::NI ? m.light_ni({v, w, coding.id}) : m.light_vertex({v, w, coding.id});
  return coding.mode == VertexMode::NI ? m.ni({v, w}) : m.vertex({v, w});
}
}  // namespace

F graph_to_poset(const F& sigma, const std::string& w, const Coding& coding) {
  check_unused(sigma, w);
  if (coding.light) check_unused(sigma, coding.id);
  if (coding.light && coding.id == w) throw std::invalid_argument("graph_to_poset: w and the Id variable coincide");
  const PosetMacros& m = poset_defs();
  Translator t;
  t.atom = [&](const F& a) -> F {
    if (a->node != Node::Edge) throw std::invalid_argument("graph_to_poset: non-graph atom in " + print(a));
    if (coding.light) return m.light_edge({a->args[0], a->args[1], w, coding.id});
    return m.edge({a->args[0], a->args[1], w});
  };
  t.guard = [&](const std::string& v) { return vertex_guard(v, w, coding); };
  return t.run(sigma);
}

F at_code(const F& sigma, const std::string& c, const Coding& coding) {
  F body = graph_to_poset(sigma, c, coding);
  std::vector<F> parts;
  for (const auto& v : free_vars(sigma)) parts.push_back(vertex_guard(v, c, coding));
  parts.push_back(body);
  return conj(std::move(parts));
}

// ---- poset macros ---------------------------------------------------------

PosetMacros poset_macros() {
  PosetMacros m;
  m.least = macro("Least", {"b"}, forall("z", leq("b", "z")));
  m.minimal = macro("Minimal", {"x"},
                    conj({neg(m.least({"x"})), exists("z", conj({lt("z", "x")})),
                          forall("z", implies(lt("z", "x"), m.least({"z"})))}));
  m.smc = macro("SMC", {"a", "d", "e"},
                conj({incomparable("d", "e"), lt("d", "a"), lt("e", "a"),
                      forall("z", implies(lt("z", "a"), disj({leq("z", "d"), leq("z", "e")})))}));
  m.vertex = macro("V", {"x", "c"}, conj({m.minimal({"x"}), leq("x", "c")}));
  m.edge = macro("E", {"x", "y", "c"},
                 conj({m.vertex({"x", "c"}), m.vertex({"y", "c"}),
                       exists("a", conj({leq("a", "c"), m.smc({"a", "x", "y"}),
                                         exists("b", conj({leq("b", "c"), m.smc({"b", "x", "y"}),
                                                           incomparable("a", "b")}))}))}));
  m.ni = macro("NI", {"x", "c"}, conj({m.vertex({"x", "c"}), exists("y", m.edge({"x", "y", "c"}))}));

  m.light_minimal = macro("LightMinimal", {"x", "i"},
                          conj({lt("i", "x"), forall("z", implies(conj({lt("i", "z"), leq("z", "x")}), eq("z", "x")))}));
  m.light_smc = macro("LightSMC", {"a", "d", "e", "i"},
                      conj({neg(eq("d", "e")), lt("d", "a"), lt("e", "a"),
                            forall("z", implies(conj({lt("z", "a"), leq("i", "z")}),
                                                disj({eq("z", "d"), eq("z", "e"), eq("z", "i")})))}));
  m.light_vertex = macro("LightV", {"x", "c", "i"}, conj({m.light_minimal({"x", "i"}), leq("x", "c")}));
  m.light_edge = macro("LightE", {"x", "y", "c", "i"},
                       conj({m.light_vertex({"x", "c", "i"}), m.light_vertex({"y", "c", "i"}),
                             exists("a", conj({leq("a", "c"), m.light_smc({"a", "x", "y", "i"}),
                                               exists("b", conj({leq("b", "c"), m.light_smc({"b", "x", "y", "i"}),
                                                                 incomparable("a", "b")}))}))}));
  m.light_ni = macro("LightNI", {"x", "c", "i"},
                     conj({m.light_vertex({"x", "c", "i"}), exists("y", m.light_edge({"x", "y", "c", "i"}))}));
  m.light_cover = macro("LightCover", {"y", "x", "i"},
                        conj({leq("i", "x"), lt("x", "y"),
                              forall("z", implies(conj({lt("z", "y"), leq("i", "z")}), leq("z", "x")))}));
  m.light_pair_coded = macro(
      "LightPairCoded", {"f", "p", "q", "i"},
      conj({m.light_minimal({"p", "i"}), m.light_minimal({"q", "i"}), neg(eq("p", "q")),
            exists("x", conj({lt("x", "f"), leq("p", "x"), leq("q", "x"),
                              forall("n", implies(conj({leq("n", "x"), m.light_minimal({"n", "i"})}),
                                                  disj({eq("n", "p"), eq("n", "q")}))),
                              exists("y", conj({m.light_cover({"y", "x", "i"}),
                                                exists("z", conj({m.light_cover({"z", "y", "i"}), leq("z", "f")}))}))}))}));
  return m;
}

// ---- Robinson's Q ---------------------------------------------------------

std::vector<Axiom> q_axioms(bool bounded) {
  const ArithFormulas a = arith_formulas();
  auto zero = [&](const std::string& x) { return a.zero({x}); };
  auto succ = [&](const std::string& x, const std::string& y) { return a.succ({x, y}); };
  std::vector<Axiom> ax;
  ax.push_back({"zero exists and is unique",
                conj({exists("z", zero("z")),
                      forall_vars({"z", "z2"}, implies(conj({zero("z"), zero("z2")}), eq("z", "z2")))})});
  ax.push_back({"successor is never zero", forall_vars({"x", "y"}, implies(succ("x", "y"), neg(zero("y"))))});
  ax.push_back({"successor is injective",
                forall_vars({"x", "y", "u"}, implies(conj({succ("x", "u"), succ("y", "u")}), eq("x", "y")))});
  ax.push_back({"nonzero has a predecessor", forall("x", disj({zero("x"), exists("y", succ("y", "x"))}))});
  ax.push_back({"x + 0 = x", forall_vars({"x", "z"}, implies(zero("z"), plus("x", "z", "x")))});
  ax.push_back({"x + Sy = S(x + y)",
                forall_vars({"x", "y", "u", "v", "t"},
                       implies(conj({succ("y", "u"), plus("x", "y", "v"), succ("v", "t")}), plus("x", "u", "t")))});
  ax.push_back({"x * 0 = 0", forall_vars({"x", "z"}, implies(zero("z"), times("x", "z", "z")))});
  ax.push_back({"x * Sy = x * y + x",
                forall_vars({"x", "y", "u", "v", "t"},
                       implies(conj({succ("y", "u"), times("x", "y", "v"), plus("v", "x", "t")}), times("x", "u", "t")))});
  ax.push_back({"+ is functional",
                forall_vars({"x", "y", "z", "z2"}, implies(conj({plus("x", "y", "z"), plus("x", "y", "z2")}), eq("z", "z2")))});
  ax.push_back({"* is functional",
                forall_vars({"x", "y", "z", "z2"}, implies(conj({times("x", "y", "z"), times("x", "y", "z2")}), eq("z", "z2")))});
  ax.push_back({"successor is functional",
                forall_vars({"x", "y", "y2"}, implies(conj({succ("x", "y"), succ("x", "y2")}), eq("y", "y2")))});
  if (!bounded) {
    ax.push_back({"successor is total", forall("x", exists("y", succ("x", "y")))});
    ax.push_back({"+ is total", forall_vars({"x", "y"}, exists("z", plus("x", "y", "z")))});
    ax.push_back({"* is total", forall_vars({"x", "y"}, exists("z", times("x", "y", "z")))});
  }
  return ax;
}

F good_code_formula(bool bounded, const std::string& w, const Coding& coding) {
  std::vector<F> parts;
  for (const auto& ax : q_axioms(bounded)) parts.push_back(ax.formula);
  return graph_to_poset(arith_to_graph(conj(std::move(parts))), w, coding);
}

// ---- names, labels and the copy of N --------------------------------------

namespace {

// Pieces shared by the dark and light readings of the copy of N. The
// relativized bodies are built once, with the code named "c".
struct CodeView {
  Coding coding;
  GraphFormulas g = defining_formulas();
  F u, l, z, plus, times, q;

  explicit CodeView(Coding cd) : coding(std::move(cd)) {
    u = at_code(g.universe.body, "c", coding);
    l = at_code(g.le.body, "c", coding);
    z = at_code(g.zero.body, "c", coding);
    plus = at_code(g.phi_plus.body, "c", coding);
    times = at_code(g.phi_times.body, "c", coding);
    q = good_code_formula(false, "c", coding);
  }

  F universe(const std::string& x, const std::string& c) const { return instantiate(u, {{"x", x}, {"c", c}}); }
  F le(const std::string& x, const std::string& y, const std::string& c) const {
    return instantiate(l, {{"x", x}, {"y", y}, {"c", c}});
  }
  F zero(const std::string& x, const std::string& c) const { return instantiate(z, {{"x", x}, {"c", c}}); }
  F phi(bool is_plus, const std::string& x, const std::string& y, const std::string& zz, const std::string& c) const {
    return instantiate(is_plus ? plus : times, {{"x", x}, {"y", y}, {"z", zz}, {"c", c}});
  }
  F good(const std::string& c) const { return instantiate(q, {{"c", c}}); }
};

}  // namespace

namespace {
NameFormulas build_name_formulas() {
  NameFormulas n;
  const PosetMacros& pm = poset_defs();
  const CodeView dark(Coding{});
  const CodeView light(Coding{VertexMode::NI, true, "i"});

  auto interval_of = [](const CodeView& v, const std::string& name, std::vector<std::string> extra) {
    // x in [a, b] inside U^c
    std::vector<std::string> params{"x", "a", "b", "c"};
    for (auto& e : extra) params.push_back(e);
    return macro(name, params, conj({v.universe("x", "c"), v.le("a", "x", "c"), v.le("x", "b", "c")}));
  };
  n.interval = interval_of(dark, "Interval", {});
  Macro light_interval = interval_of(light, "LightInterval", {"i"});

  auto E = [&](const std::string& a, const std::string& b) { return pm.edge({a, b, "f"}); };
  n.graph_label = macro(
      "GraphLabel", {"f", "x", "y"},
      exists("a", conj({E("x", "a"),
                        exists("d", conj({E("a", "d"), E("d", "y"),
                                          exists("b", conj({E("a", "b"),
                                                            exists("cc", conj({E("b", "cc"), E("cc", "a"),
                                                                               distinct({"a", "b", "cc", "d", "x", "y"})}))}))}))})));
  n.name_decodes = macro("NameDecodes", {"f", "x", "y"},
                         conj({n.graph_label({"f", "x", "y"}),
                               forall("y2", implies(n.graph_label({"f", "x", "y2"}), eq("y2", "y")))}));

  // x ranges over [0^c, d] of U^c
  auto in_initial = [](const CodeView& v, const Macro& interval, const std::string& x, const std::string& c,
                       const std::string& d, bool is_light) {
    std::vector<std::string> args{x, "o", d, c};
    if (is_light) args.push_back(v.coding.id);
    return exists("o", conj({v.zero("o", c), interval(args)}));
  };

  auto sim_body = [&](const CodeView& v, const Macro& interval, bool is_light,
                      const std::function<F(const std::string&, const std::string&)>& maps,
                      const std::vector<std::string>& witnesses) {
    auto in1 = [&](const std::string& x) { return in_initial(v, interval, x, "c", "d", is_light); };
    auto in2 = [&](const std::string& y) { return in_initial(v, interval, y, "c2", "d2", is_light); };
    F total = forall("x", implies(in1("x"), exists("y", conj({maps("x", "y"), in2("y")}))));
    F onto = forall("y", implies(in2("y"), exists("x", conj({in1("x"), maps("x", "y")}))));
    F order = forall_vars({"x1", "x2", "y1", "y2"},
                     implies(conj({in1("x1"), in1("x2"), maps("x1", "y1"), maps("x2", "y2")}),
                             iff(v.le("x1", "x2", "c"), v.le("y1", "y2", "c2"))));
    F coded = conj({v.good("c"), v.good("c2"), v.universe("d", "c"), v.universe("d2", "c2"),
                    exists_vars(witnesses, conj({total, onto, order}))});
    return disj({conj({eq("c", "c2"), eq("d", "d2")}), coded});
  };

  n.sim = macro("Sim", {"c", "d", "c2", "d2"},
                sim_body(dark, n.interval, false,
                         [&](const std::string& x, const std::string& y) { return n.name_decodes({"f", x, y}); },
                         {"f"}));
  n.good = macro("Good", {"c"}, dark.good("c"));
  n.n_member = macro("NMember", {"c", "d"},
                     forall("c2", implies(n.good({"c2"}), exists("d2", n.sim({"c", "d", "c2", "d2"})))));
  auto n_op = [&](const std::string& name, bool is_plus) {
    std::vector<std::string> es{"e1", "e2", "e3"};
    return macro(name, {"c1", "d1", "c2", "d2", "c3", "d3"},
                 exists("ch", conj({n.good({"ch"}),
                                    exists_vars(es, conj({dark.universe("e1", "ch"), dark.universe("e2", "ch"),
                                                     dark.universe("e3", "ch"), n.sim({"c1", "d1", "ch", "e1"}),
                                                     n.sim({"c2", "d2", "ch", "e2"}), n.sim({"c3", "d3", "ch", "e3"}),
                                                     dark.phi(is_plus, "e1", "e2", "e3", "ch")}))})));
  };
  n.n_plus = n_op("NPlus", true);
  n.n_times = n_op("NTimes", false);

  n.light_label_maps = macro(
      "LightLabelMaps", {"f", "g", "c", "c2", "a", "a2", "i"},
      exists("b", conj({pm.light_minimal({"b", "i"}), neg(leq("b", "c")), neg(leq("b", "c2")),
                        pm.light_pair_coded({"f", "a", "b", "i"}), pm.light_pair_coded({"g", "b", "a2", "i"})})));
  n.light_sim = macro("LightSim", {"c", "d", "c2", "d2", "i"},
                      sim_body(light, light_interval, true,
                               [&](const std::string& x, const std::string& y) {
                                 return n.light_label_maps({"f", "g", "c", "c2", x, y, "i"});
                               },
                               {"f", "g"}));
  return n;
}

}  // namespace

// Expanding the copy of N takes seconds, so it is built once per process.
NameFormulas name_formulas() {
  static const NameFormulas n = build_name_formulas();
  return n;
}

}  // namespace ceerlab::interp
