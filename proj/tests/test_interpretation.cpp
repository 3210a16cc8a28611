#include <doctest.h>

#include <deque>
#include <set>
#include <string>

#include "arith_oracle.hpp"
#include "ceerlab/degree_probe.hpp"
#include "ceerlab/interpretation.hpp"
#include "ceerlab/model_check.hpp"

using namespace ceerlab;
using namespace ceerlab::interp;
using namespace ceerlab::logic;

namespace {

// BFS distances from s, computed without the library's formulas.
std::vector<int> distances(const FiniteGraph& g, std::size_t s) {
  std::vector<int> d(g.size(), -1);
  std::deque<std::size_t> q{s};
  d[s] = 0;
  while (!q.empty()) {
    auto v = q.front();
    q.pop_front();
    for (auto w : g.neighbours(v))
      if (d[w] < 0) {
        d[w] = d[v] + 1;
        q.push_back(w);
      }
  }
  return d;
}

std::size_t leaf_neighbours(const FiniteGraph& g, std::size_t v) {
  std::size_t n = 0;
  for (auto w : g.neighbours(v)) n += g.degree(w) == 1;
  return n;
}

FinitePoset poset(const std::vector<std::string>& elems, const std::vector<std::pair<std::string, std::string>>& leq) {
  FinitePoset p;
  for (const auto& e : elems) p.add_element(e);
  for (const auto& [a, b] : leq) p.add_leq(p.at(a), p.at(b));
  p.close();
  return p;
}

// bottom < r1, r2 < a, b < top with a, b strongly minimal covers of r1, r2
FinitePoset double_cover(bool with_b) {
  std::vector<std::string> el{"0", "r1", "r2", "a", "top"};
  std::vector<std::pair<std::string, std::string>> le{
      {"0", "r1"}, {"0", "r2"}, {"r1", "a"}, {"r2", "a"}, {"a", "top"}};
  if (with_b) {
    el.push_back("b");
    le.insert(le.end(), {{"r1", "b"}, {"r2", "b"}, {"b", "top"}});
  }
  return poset(el, le);
}

}  // namespace

TEST_CASE("gadget fragment shape") {
  CHECK_THROWS_AS(build_gadget_graph(0), std::invalid_argument);
  auto gg = build_gadget_graph(2);
  const auto& g = gg.graph;
  std::set<std::tuple<Nat, Nat, Nat>> plus;
  for (const auto& h : gg.hubs)
    if (h.op == '+') plus.insert({h.a, h.b, h.c});
  const std::set<std::tuple<Nat, Nat, Nat>> want{{0, 0, 0}, {0, 1, 1}, {1, 0, 1}, {0, 2, 2}, {2, 0, 2}, {1, 1, 2}};
  CHECK(plus == want);

  for (std::size_t v = 0; v < g.size(); ++v) CHECK(g.degree(v) > 0);
  for (const auto& h : gg.hubs) {
    CHECK(leaf_neighbours(g, h.vertex) == (h.op == '+' ? 2u : 3u));
    for (auto w : g.neighbours(h.vertex))
      if (g.degree(w) == 1) CHECK(g.name(w).find(".leaf") != std::string::npos);
    auto d = distances(g, h.vertex);
    CHECK(d[gg.element[h.a]] <= 2);
    CHECK(d[gg.element[h.b]] <= 3);
    CHECK(d[gg.element[h.c]] <= 4);
  }
  for (auto e : gg.element)
    for (auto w : g.neighbours(e)) CHECK(g.degree(w) == 2);
  CHECK(g.name(gg.element[0]) == "e0");
}

TEST_CASE("defining formulas on fragments") {
  const auto d = defining_formulas();
  auto g6 = build_gadget_graph(6);
  auto m6 = Structure::graph(g6.graph);
  auto e = [&](const GadgetGraph& gg, Nat k) { return gg.element[k]; };
  CHECK(ModelChecker(m6, d.phi_plus.body).eval({{"x", e(g6, 2)}, {"y", e(g6, 2)}, {"z", e(g6, 4)}}));
  CHECK_FALSE(ModelChecker(m6, d.phi_plus.body).eval({{"x", e(g6, 1)}, {"y", e(g6, 1)}, {"z", e(g6, 3)}}));

  auto g3 = build_gadget_graph(3);
  auto m3 = Structure::graph(g3.graph);
  ModelChecker zero(m3, d.zero.body);
  CHECK(zero.eval({{"x", e(g3, 0)}}));
  for (Nat k = 1; k <= 3; ++k) CHECK_FALSE(zero.eval({{"x", e(g3, k)}}));

  // U holds exactly on the element vertices
  ModelChecker u(m3, d.universe.body);
  std::set<std::size_t> elems(g3.element.begin(), g3.element.end());
  for (std::size_t v = 0; v < g3.graph.size(); ++v) CHECK(u.eval({{"x", v}}) == (elems.count(v) == 1));
}

TEST_CASE("plus and times are functional on a fragment") {
  const Nat n = 8;
  const auto d = defining_formulas();
  auto gg = build_gadget_graph(n);
  auto m = Structure::graph(gg.graph);
  ModelChecker plus(m, d.phi_plus.body), times(m, d.phi_times.body);
  for (Nat a = 0; a <= n; ++a)
    for (Nat b = 0; b <= n; ++b)
      for (Nat c = 0; c <= n; ++c) {
        std::vector<std::size_t> t{gg.element[a], gg.element[b], gg.element[c]};
        CHECK(plus.eval_tuple(t) == (a + b == c));
        CHECK(times.eval_tuple(t) == (a * b == c));
      }
  // le and succ follow from plus
  ModelChecker le(m, d.le.body), succ(m, d.succ.body);
  for (Nat a = 0; a <= n; ++a)
    for (Nat b = 0; b <= n; ++b) {
      CHECK(le.eval_tuple({gg.element[a], gg.element[b]}) == (a <= b));
      CHECK(succ.eval_tuple({gg.element[a], gg.element[b]}) == (a + 1 == b));
    }
}

TEST_CASE("translation to the graph") {
  const auto d = defining_formulas();
  auto s = parse("exists x. x + x = x");
  auto want = exists("x", conj({d.universe({"x"}), d.phi_plus({"x", "x", "x"})}));
  CHECK(structurally_equal(arith_to_graph(s), want));

  auto a = parse("forall x. exists y. x * y = y");
  auto b = parse("exists x. x + x = x & !(x * x = x)");
  CHECK(structurally_equal(arith_to_graph(neg(a)), neg(arith_to_graph(a))));
  CHECK(structurally_equal(arith_to_graph(conj({a, b})), conj({arith_to_graph(a), arith_to_graph(b)})));
  CHECK(structurally_equal(arith_to_graph(disj({a, b})), disj({arith_to_graph(a), arith_to_graph(b)})));
  CHECK_THROWS_AS(arith_to_graph(parse("E(x, y)")), std::invalid_argument);

  auto g5 = build_gadget_graph(5);
  CHECK(model_check(arith_to_graph(parse("forall x. exists y. x + y = x")), Structure::graph(g5.graph)));
}

TEST_CASE("bounded corpus agrees with N through the gadget") {
  const auto corpus = arithmetic_corpus();
  REQUIRE(corpus.size() >= 30);
  const Nat n = corpus_fragment(corpus);
  CHECK(n == 18);
  auto gg = build_gadget_graph(n);
  auto g = Structure::graph(gg.graph);
  auto arith = Structure::arithmetic(n);
  std::size_t trues = 0;
  for (const auto& s : corpus) {
    CAPTURE(s.text);
    auto it = oracle::corpus_truth().find(s.text);
    REQUIRE(it != oracle::corpus_truth().end());
    const bool truth = it->second();
    trues += truth;
    CHECK(free_vars(s.sentence).empty());
    CHECK(model_check(s.sentence, arith) == truth);
    CHECK(model_check(arith_to_graph(s.sentence), g) == truth);
  }
  CHECK(trues > 5);
  CHECK(corpus.size() - trues > 5);
  CHECK_THROWS_AS(corpus_sentence("A x 3 x = x"), std::invalid_argument);
  CHECK_THROWS_AS(corpus_sentence("Q x 3 : x = x"), std::invalid_argument);
  CHECK_THROWS_AS(corpus_sentence("A x 3 : x = y"), std::invalid_argument);
}

TEST_CASE("poset macros") {
  const auto pm = poset_macros();
  const auto again = poset_macros();
  for (auto [m1, m2] : {std::pair{pm.minimal, again.minimal}, {pm.smc, again.smc}, {pm.edge, again.edge},
                        {pm.ni, again.ni}, {pm.light_edge, again.light_edge},
                        {pm.light_pair_coded, again.light_pair_coded}}) {
    CHECK(structurally_equal(m1.body, m2.body));
    // expanding with the parameters themselves changes nothing
    CHECK(structurally_equal(m1(m1.params), m1.body));
  }

  auto p = double_cover(true);
  auto m = Structure::poset(p);
  ModelChecker e(m, pm.edge.body);
  CHECK(e.eval({{"x", p.at("r1")}, {"y", p.at("r2")}, {"c", p.at("top")}}));
  CHECK_FALSE(e.eval({{"x", p.at("r1")}, {"y", p.at("r2")}, {"c", p.at("a")}}));
  CHECK_FALSE(model_check(pm.minimal.body, m, {{"x", p.at("0")}}));
  CHECK(model_check(pm.minimal.body, m, {{"x", p.at("r1")}}));

  auto q = double_cover(false);
  CHECK_FALSE(model_check(pm.edge.body, Structure::poset(q), {{"x", q.at("r1")}, {"y", q.at("r2")}, {"c", q.at("top")}}));
}

TEST_CASE("graph to poset") {
  const auto pm = poset_macros();
  auto s = parse("exists x. exists y. E(x, y)");
  auto t = graph_to_poset(s, "w");
  auto want = exists("x", conj({pm.ni({"x", "w"}), exists("y", conj({pm.ni({"y", "w"}), pm.edge({"x", "y", "w"})}))}));
  CHECK(structurally_equal(t, want));
  auto tv = graph_to_poset(s, "w", Coding{VertexMode::V, false, "i"});
  CHECK(structurally_equal(
      tv, exists("x", conj({pm.vertex({"x", "w"}), exists("y", conj({pm.vertex({"y", "w"}), pm.edge({"x", "y", "w"})}))}))));
  CHECK(free_vars(t) == std::set<std::string>{"w"});
  CHECK_THROWS_AS(graph_to_poset(parse("x <= y"), "w"), std::invalid_argument);
  CHECK_THROWS_AS(graph_to_poset(parse("exists w. E(w, w)"), "w"), std::invalid_argument);

  auto p = double_cover(true);
  auto m = Structure::poset(p);
  auto no_edges = graph_to_poset(parse("forall x. forall y. !E(x, y)"), "w");
  CHECK_FALSE(model_check(no_edges, m, {{"w", p.at("top")}}));
  CHECK(model_check(no_edges, m, {{"w", p.at("a")}}));
  CHECK(model_check(t, m, {{"w", p.at("top")}}));
}

TEST_CASE("good codes, bounded") {
  auto axioms = q_axioms(false);
  auto bounded = q_axioms(true);
  CHECK(axioms.size() == bounded.size() + 3);
  for (const auto& a : axioms) CHECK(free_vars(a.formula).empty());

  // the bounded axioms hold on the arithmetic fragment and on the gadget
  auto arith = Structure::arithmetic(6);
  auto g = build_gadget_graph(6);
  for (const auto& a : bounded) {
    CAPTURE(a.name);
    CHECK(model_check(a.formula, arith));
    CHECK(model_check(arith_to_graph(a.formula), Structure::graph(g.graph)));
  }
  // totality fails at the top of a fragment
  for (const auto& a : axioms)
    if (a.name.find("total") != std::string::npos) CHECK_FALSE(model_check(a.formula, arith));

  auto q = good_code_formula(true, "w");
  CHECK(free_vars(q) == std::set<std::string>{"w"});
  auto gadget = probe::poset_from_graph(build_gadget_graph(1).graph);
  ModelChecker mc(Structure::poset(gadget), q);
  CHECK(mc.eval({{"w", gadget.at("c")}}));

  // a graph with edges but no arithmetic hubs: no zero, so no model
  FiniteGraph path(3);
  path.add_edge(0, 1);
  path.add_edge(1, 2);
  auto bare = probe::poset_from_graph(path);
  CHECK_FALSE(model_check(q, Structure::poset(bare), {{"w", bare.at("c")}}));

  // the composed tower of "exists x. x = x" sees the nonempty universe
  auto some = graph_to_poset(arith_to_graph(parse("exists x. x = x")), "w");
  CHECK(model_check(some, Structure::poset(gadget), {{"w", gadget.at("c")}}));
  CHECK_FALSE(model_check(some, Structure::poset(bare), {{"w", bare.at("c")}}));
}

TEST_CASE("names and the copy of N") {
  const auto n = name_formulas();
  CHECK(n.sim.params.size() == 4);
  CHECK(free_vars(n.sim.body) == std::set<std::string>{"c", "c2", "d", "d2"});
  CHECK(free_vars(n.n_plus.body).size() == 6);
  CHECK(free_vars(n.light_sim.body) == std::set<std::string>{"c", "c2", "d", "d2", "i"});
  auto p = double_cover(true);
  auto m = Structure::poset(p);
  ModelChecker sim(m, n.sim.body);
  // reflexive through the "the two pairs coincide" clause, even off good codes
  for (std::size_t c = 0; c < p.size(); ++c)
    for (std::size_t d = 0; d < p.size(); ++d) CHECK(sim.eval({{"c", c}, {"d", d}, {"c2", c}, {"d2", d}}));
  // no good code here, so distinct pairs are never related
  CHECK_FALSE(sim.eval({{"c", p.at("top")}, {"d", p.at("r1")}, {"c2", p.at("top")}, {"d2", p.at("r2")}}));
}
