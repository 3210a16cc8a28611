#include <doctest.h>

#include <map>
#include <string>
#include <vector>

#include "ceerlab/formula.hpp"
#include "ceerlab/model_check.hpp"
#include "oracles.hpp"

using namespace ceerlab;
using namespace ceerlab::logic;

namespace {

// Plain Tarskian evaluation over explicit relation tables: no compilation,
// no memo, every quantifier scans the whole universe.
struct NaiveModel {
  std::size_t n = 0;
  std::vector<std::vector<bool>> rel;  // leq or edge
};

bool naive_eval(const F& f, const NaiveModel& m, std::map<std::string, std::size_t>& env) {
  switch (f->node) {
    case Node::True: return true;
    case Node::False: return false;
    case Node::Eq: return env.at(f->args[0]) == env.at(f->args[1]);
    case Node::Leq:
    case Node::Edge: return m.rel[env.at(f->args[0])][env.at(f->args[1])];
    case Node::Plus:
    case Node::Times: throw std::logic_error("not used here");
    case Node::Not: return !naive_eval(f->kids[0], m, env);
    case Node::And:
      for (const auto& k : f->kids)
        if (!naive_eval(k, m, env)) return false;
      return true;
    case Node::Or:
      for (const auto& k : f->kids)
        if (naive_eval(k, m, env)) return true;
      return false;
    case Node::Implies: return !naive_eval(f->kids[0], m, env) || naive_eval(f->kids[1], m, env);
    case Node::Forall:
    case Node::Exists: {
      const std::string v = f->args[0];
      const bool all = f->node == Node::Forall;
      auto saved = env.find(v) == env.end() ? std::nullopt : std::optional<std::size_t>(env[v]);
      bool result = all;
      for (std::size_t t = 0; t < m.n; ++t) {
        env[v] = t;
        if (naive_eval(f->kids[0], m, env) != all) {
          result = !all;
          break;
        }
      }
      if (saved) env[v] = *saved;
      else env.erase(v);
      return result;
    }
  }
  return false;
}

F random_formula(oracle::Rng& rng, int depth, bool poset) {
  static const char* vars[] = {"x", "y", "z", "u"};
  auto var = [&] { return std::string(vars[rng.below(4)]); };
  if (depth == 0 || rng.below(5) == 0) {
    switch (rng.below(4)) {
      case 0: return eq(var(), var());
      case 1: return rng.below(8) == 0 ? top() : (poset ? leq(var(), var()) : edge(var(), var()));
      default: return poset ? leq(var(), var()) : edge(var(), var());
    }
  }
  switch (rng.below(7)) {
    case 0: return neg(random_formula(rng, depth - 1, poset));
    case 1: return conj({random_formula(rng, depth - 1, poset), random_formula(rng, depth - 1, poset),
                         random_formula(rng, depth - 1, poset)});
    case 2: return disj({random_formula(rng, depth - 1, poset), random_formula(rng, depth - 1, poset)});
    case 3: return implies(random_formula(rng, depth - 1, poset), random_formula(rng, depth - 1, poset));
    case 4: {
      // guarded shapes exercise the candidate narrowing
      auto v = var(), w = var();
      F g = poset ? leq(v, w) : edge(w, v);
      return rng.below(2) ? exists(v, conj({g, random_formula(rng, depth - 1, poset)}))
                          : forall(v, implies(g, random_formula(rng, depth - 1, poset)));
    }
    case 5: return forall(var(), random_formula(rng, depth - 1, poset));
    default: return exists(var(), random_formula(rng, depth - 1, poset));
  }
}

}  // namespace

TEST_CASE("builders collapse trivial connectives") {
  CHECK(conj({}) == top());
  CHECK(disj({}) == bottom());
  auto a = eq("x", "y");
  CHECK(conj({a}) == a);
  CHECK(forall_vars({"x", "y"}, a)->kids[0]->node == Node::Forall);
}

TEST_CASE("free variables and signatures") {
  auto f = parse("forall x. exists y. x <= y & y <= z");
  CHECK(free_vars(f) == std::set<std::string>{"z"});
  CHECK(signature_of(f) == Signature::Poset);
  CHECK(signature_of(parse("x = y")) == std::nullopt);
  CHECK_THROWS_AS(signature_of(conj({leq("x", "y"), edge("x", "y")})), std::invalid_argument);
  CHECK(quantifier_depth(f) == 2);
}

TEST_CASE("parser follows the precedence ! > & > | > ->") {
  auto f = parse("a = b | b = c & !c = d -> d = e");
  REQUIRE(f->node == Node::Implies);
  REQUIRE(f->kids[0]->node == Node::Or);
  CHECK(f->kids[0]->kids[1]->node == Node::And);
  CHECK(f->kids[0]->kids[1]->kids[1]->node == Node::Not);
  auto r = parse("a = a -> b = b -> c = c");
  CHECK(r->kids[1]->node == Node::Implies);
  auto q = parse("forall x y. E(x, y) -> E(y, x)");
  REQUIRE(q->node == Node::Forall);
  CHECK(q->kids[0]->node == Node::Forall);
  CHECK(q->kids[0]->kids[0]->node == Node::Implies);
  auto arith = parse("exists x. x + x = x & x * y = z");
  CHECK(signature_of(arith) == Signature::Arith);
  CHECK_THROWS_AS(parse("x <= "), std::invalid_argument);
  CHECK_THROWS_AS(parse("(x = y"), std::invalid_argument);
  CHECK_THROWS_AS(parse("x = y )"), std::invalid_argument);
  CHECK_THROWS_AS(parse("forall . x = x"), std::invalid_argument);
}

TEST_CASE("printing round-trips on random formulas") {
  oracle::Rng rng(11);
  for (int k = 0; k < 300; ++k) {
    F f = random_formula(rng, 4, k % 2 == 0);
    F g = parse(print(f));
    INFO(print(f));
    CHECK(structurally_equal(f, g));
  }
  // nested same-kind connectives keep their grouping
  F nested = conj({conj({eq("a", "b"), eq("b", "c")}), eq("c", "d")});
  CHECK(structurally_equal(parse(print(nested)), nested));
  F nn = neg(neg(eq("a", "b")));
  CHECK(structurally_equal(parse(print(nn)), nn));
}

TEST_CASE("capture-avoiding instantiation") {
  F f = parse("exists y. x <= y");
  F g = instantiate(f, {{"x", "y"}});
  // the bound y must have been renamed, leaving the new free y intact
  CHECK(free_vars(g) == std::set<std::string>{"y"});
  CHECK(alpha_equivalent(g, parse("exists w. y <= w")));
  CHECK_FALSE(alpha_equivalent(g, parse("exists y. y <= y")));
  // bound occurrences are untouched
  F h = instantiate(parse("forall x. x <= x"), {{"x", "q"}});
  CHECK(print(h) == "forall x. x <= x");
  // simultaneous swap
  F s = instantiate(parse("x <= y"), {{"x", "y"}, {"y", "x"}});
  CHECK(print(s) == "y <= x");
}

TEST_CASE("name supply avoids reserved names") {
  NameSupply ns;
  ns.reserve(parse("forall a0. a0 = a1"));
  CHECK(ns.fresh("a") == "a2");
  CHECK(ns.fresh("a") == "a3");
  CHECK(ns.fresh("b") == "b0");
}

TEST_CASE("spec examples for the checker") {
  FinitePoset chain;
  for (auto n : {"0", "1", "2"}) chain.add_element(n);
  chain.add_leq(0, 1);
  chain.add_leq(1, 2);
  chain.close();
  auto P = Structure::poset(chain);
  CHECK(model_check(parse("forall x. x <= x"), P));
  CHECK(model_check(parse("exists x. forall y. x <= y"), P));
  CHECK_FALSE(model_check(parse("exists x. forall y. y <= x -> x = y & !(y = y)"), P));

  FiniteGraph tri(3);
  tri.add_edge(0, 1);
  tri.add_edge(1, 2);
  tri.add_edge(0, 2);
  auto G = Structure::graph(tri);
  ModelChecker mc(G, parse("E(a, b)"));
  for (std::size_t a = 0; a < 3; ++a)
    for (std::size_t b = 0; b < 3; ++b) CHECK(mc.eval({{"a", a}, {"b", b}}) == (a != b));

  CHECK_THROWS_AS(model_check(parse("x <= y"), G, {{"x", 0}, {"y", 1}}), std::invalid_argument);
  CHECK_THROWS_AS(model_check(parse("E(x, y)"), G, {{"x", 0}}), std::invalid_argument);
  CHECK_THROWS_AS(model_check(parse("E(x, y)"), G, {{"x", 0}, {"y", 7}}), std::invalid_argument);
}

TEST_CASE("arithmetic fragments are partial structures") {
  auto A = Structure::arithmetic(6);
  CHECK(model_check(parse("exists z. x + y = z"), A, {{"x", 2}, {"y", 4}}));
  CHECK_FALSE(model_check(parse("exists z. x + y = z"), A, {{"x", 3}, {"y", 4}}));
  CHECK(model_check(parse("forall x. exists y. x * y = y"), A));  // y = 0
  CHECK(model_check(parse("exists y. y * y = x"), A, {{"x", 4}}));
  CHECK_FALSE(model_check(parse("exists y. y * y = x"), A, {{"x", 5}}));
  CHECK(model_check(parse("exists y. x * y = z"), A, {{"x", 0}, {"z", 0}}));
  CHECK(A.element("5") == 5);
  CHECK_THROWS(A.element("9"));
}

TEST_CASE("compiled checker agrees with the naive evaluator") {
  oracle::Rng rng(2024);
  int checked = 0;
  for (int k = 0; k < 100; ++k) {
    const bool poset = k % 2 == 0;
    const std::size_t n = 1 + rng.below(6);
    NaiveModel nm;
    nm.n = n;
    nm.rel.assign(n, std::vector<bool>(n, false));
    FinitePoset p;
    FiniteGraph g(n);
    if (poset) {
      for (std::size_t v = 0; v < n; ++v) p.add_element();
      // random DAG on the index order, then closed
      for (std::size_t a = 0; a < n; ++a)
        for (std::size_t b = a + 1; b < n; ++b)
          if (rng.below(3) == 0) p.add_leq(a, b);
      p.close();
      // independent closure for the naive side
      for (std::size_t a = 0; a < n; ++a) nm.rel[a][a] = true;
      for (auto [a, b] : p.covers()) nm.rel[a][b] = true;
      for (std::size_t m = 0; m < n; ++m)
        for (std::size_t a = 0; a < n; ++a)
          for (std::size_t b = 0; b < n; ++b)
            if (nm.rel[a][m] && nm.rel[m][b]) nm.rel[a][b] = true;
    } else {
      for (std::size_t a = 0; a < n; ++a)
        for (std::size_t b = a + 1; b < n; ++b)
          if (rng.below(2) == 0) {
            g.add_edge(a, b);
            nm.rel[a][b] = nm.rel[b][a] = true;
          }
    }
    auto S = poset ? Structure::poset(p) : Structure::graph(g);
    F f = random_formula(rng, 4, poset);
    ModelChecker mc(S, f);
    const auto& fv = mc.free_variables();
    // every assignment of the free variables
    std::vector<std::size_t> vals(fv.size(), 0);
    while (true) {
      std::map<std::string, std::size_t> env;
      for (std::size_t i = 0; i < fv.size(); ++i) env[fv[i]] = vals[i];
      INFO(print(f));
      CHECK(mc.eval_tuple(vals) == naive_eval(f, nm, env));
      ++checked;
      std::size_t i = 0;
      while (i < vals.size() && ++vals[i] == n) vals[i++] = 0;
      if (i == vals.size()) break;
    }
  }
  CHECK(checked >= 100);
}

TEST_CASE("memoized subformulas are shared across renamings") {
  FinitePoset p;
  for (int k = 0; k < 5; ++k) p.add_element();
  p.add_leq(0, 1);
  p.add_leq(0, 2);
  p.add_leq(1, 3);
  p.add_leq(2, 3);
  p.add_leq(3, 4);
  p.close();
  auto S = Structure::poset(p);
  F a = parse("exists t. a <= t & !(t = a)");
  F b = instantiate(a, {{"a", "b"}});
  ModelChecker mc(S, conj({a, b}));
  CHECK(mc.stats().nodes < 8);
  CHECK(mc.eval({{"a", 1}, {"b", 1}}));
  CHECK_FALSE(mc.eval({{"a", 4}, {"b", 1}}));
}
