#include <doctest.h>

#include <functional>
#include <set>
#include <string>

#include "ceerlab/construction.hpp"
#include "ceerlab/degree_probe.hpp"
#include "oracles.hpp"

using namespace ceerlab;
using namespace ceerlab::probe;

namespace {

FinitePoset poset(const std::vector<std::string>& elems, const std::vector<std::pair<std::string, std::string>>& leq) {
  FinitePoset p;
  for (const auto& e : elems) p.add_element(e);
  for (const auto& [a, b] : leq) p.add_leq(p.at(a), p.at(b));
  p.close();
  return p;
}

std::set<std::string> names(const FinitePoset& p, const std::vector<std::size_t>& v) {
  std::set<std::string> s;
  for (auto x : v) s.insert(p.name(x));
  return s;
}

using NamedTriple = std::tuple<std::string, std::string, std::string>;
std::set<NamedTriple> named_smc(const FinitePoset& p) {
  std::set<NamedTriple> out;
  for (const auto& t : smc_pairs(p)) {
    auto d = p.name(t.d), e = p.name(t.e);
    if (e < d) std::swap(d, e);
    out.insert({p.name(t.cover), d, e});
  }
  return out;
}

std::set<std::pair<std::string, std::string>> named_edges(const FiniteGraph& g) {
  std::set<std::pair<std::string, std::string>> out;
  for (auto [a, b] : g.edges()) out.insert({std::min(g.name(a), g.name(b)), std::max(g.name(a), g.name(b))});
  return out;
}

// All order automorphisms, by backtracking with a cheap invariant filter.
std::vector<std::vector<std::size_t>> automorphisms(const FinitePoset& p) {
  const std::size_t n = p.size();
  auto sig = [&](std::size_t x) { return std::pair{p.down(x).size(), p.up(x).size()}; };
  std::vector<std::vector<std::size_t>> out;
  std::vector<std::size_t> img(n);
  std::vector<bool> used(n, false);
  std::function<void(std::size_t)> go = [&](std::size_t i) {
    if (out.size() >= 200) return;
    if (i == n) {
      out.push_back(img);
      return;
    }
    for (std::size_t y = 0; y < n; ++y) {
      if (used[y] || sig(y) != sig(i)) continue;
      bool ok = true;
      for (std::size_t j = 0; j < i && ok; ++j)
        ok = p.leq(j, i) == p.leq(img[j], y) && p.leq(i, j) == p.leq(y, img[j]);
      if (!ok) continue;
      used[y] = true;
      img[i] = y;
      go(i + 1);
      used[y] = false;
    }
  };
  go(0);
  return out;
}

}  // namespace

TEST_CASE("minimal elements") {
  auto chain = poset({"0", "a", "b"}, {{"0", "a"}, {"a", "b"}});
  CHECK(names(chain, minimal_elements(chain)) == std::set<std::string>{"a"});
  auto diamond = poset({"0", "a", "b", "t"}, {{"0", "a"}, {"0", "b"}, {"a", "t"}, {"b", "t"}});
  CHECK(names(diamond, minimal_elements(diamond)) == std::set<std::string>{"a", "b"});
  auto anti = poset({"0", "p", "q", "r", "s"}, {{"0", "p"}, {"0", "q"}, {"0", "r"}, {"0", "s"}});
  CHECK(minimal_elements(anti).size() == 4);
  auto no_bottom = poset({"a", "b"}, {});
  CHECK_THROWS_AS(minimal_elements(no_bottom), std::invalid_argument);
}

TEST_CASE("strongly minimal covers") {
  auto chain = poset({"0", "a", "b"}, {{"0", "a"}, {"a", "b"}});
  CHECK(smc_pairs(chain).empty());
  auto ops = build_fixture("oplusISMC");
  CHECK(named_smc(ops.poset) == std::set<NamedTriple>{{"r1+r2", "r1", "r2"}});
  auto dc = build_fixture("double-cover");
  auto got = named_smc(dc.poset);
  CHECK(got.count({"a", "r1", "r2"}) == 1);
  CHECK(got.count({"b", "r1", "r2"}) == 1);
  // a cover with something extra below is not strongly minimal
  auto extra = poset({"0", "r1", "r2", "z", "a"}, {{"0", "r1"}, {"0", "r2"}, {"0", "z"}, {"r1", "a"}, {"r2", "a"}, {"z", "a"}});
  for (const auto& t : named_smc(extra)) CHECK(std::get<0>(t) != "a");
}

TEST_CASE("decoded graphs") {
  auto dc = build_fixture("double-cover");
  auto d = decode_Gc(dc.poset, dc.poset.at("c"));
  CHECK(d.graph.size() == 2);
  CHECK(named_edges(d.graph) == std::set<std::pair<std::string, std::string>>{{"r1", "r2"}});
  auto sc = build_fixture("single-cover");
  CHECK(decode_Gc(sc.poset, sc.poset.at("c")).graph.edge_count() == 0);
  // below one cover only, there is no edge either
  CHECK(decode_Gc(dc.poset, dc.poset.at("a")).graph.edge_count() == 0);

  // Z-dark-join: every pair with r has exactly one cover (the join), so
  // nothing gets an edge and strip mode drops every vertex
  auto z = build_fixture("Z-dark-join");
  const auto& zp = z.poset;
  std::map<std::string, int> covers_with_r;
  for (const auto& [a, d1, e1] : named_smc(zp))
    if (d1 == "r" || e1 == "r") ++covers_with_r[d1 == "r" ? e1 : d1];
  CHECK(covers_with_r == std::map<std::string, int>{{"s1", 1}, {"s2", 1}, {"s3", 1}});
  auto zd = decode_Gc(zp, zp.at("c"));
  CHECK(zd.graph.degree(*zd.graph.find("r")) == 0);
  auto stripped = decode_Gc(zp, zp.at("c"), true);
  CHECK(zd.graph.edge_count() == 0);
  CHECK(stripped.graph.size() == 0);
}

TEST_CASE("poset_from_graph round-trips through decode_Gc") {
  oracle::Rng rng(11);
  for (int trial = 0; trial < 40; ++trial) {
    const std::size_t n = 1 + rng.below(6);
    FiniteGraph g(n);
    for (std::size_t a = 0; a < n; ++a)
      for (std::size_t b = a + 1; b < n; ++b)
        if (rng.below(2)) g.add_edge(a, b);
    auto p = poset_from_graph(g);
    CHECK(p.size() == 2 + n + 2 * g.edge_count());
    auto d = decode_Gc(p, p.at("c"));
    REQUIRE(d.graph.size() == n);
    std::set<std::pair<std::string, std::string>> want;
    for (auto [a, b] : g.edges()) {
      auto x = "v" + g.name(a), y = "v" + g.name(b);
      want.insert({std::min(x, y), std::max(x, y)});
    }
    CHECK(named_edges(d.graph) == want);
  }
}

TEST_CASE("every packaged fixture checks out") {
  for (const auto& fam : fixture_families()) {
    CAPTURE(fam);
    auto fx = build_fixture(fam);
    auto r = check_fixture(fx);
    for (const auto& m : r.mismatches) MESSAGE(m);
    CHECK(r.ok());
    CHECK_FALSE(r.lines.empty());
  }
  CHECK_THROWS_AS(build_fixture("no-such-family"), std::invalid_argument);
}

TEST_CASE("check_fixture notices wrong expectations") {
  auto fx = build_fixture("single-cover");
  fx.expect_edges = {{"r1", "r2"}};
  CHECK_FALSE(check_fixture(fx).ok());
  auto nl = build_fixture("name-label");
  nl.expect_labels = {{"x1", "y2"}};
  CHECK_FALSE(check_fixture(nl).ok());
}

TEST_CASE("name pairs need a unique partner") {
  auto nl = build_fixture("name-label");
  const auto& p = nl.poset;
  auto pairs = name_pairs(p, p.at("c"));
  REQUIRE(pairs.size() == 1);
  CHECK(p.name(pairs[0].first) == "x1");
  CHECK(p.name(pairs[0].second) == "y1");

  auto nl2 = build_fixture("name-label-2");
  std::set<std::pair<std::string, std::string>> got;
  for (auto [x, y] : name_pairs(nl2.poset, nl2.poset.at("c"))) got.insert({nl2.poset.name(x), nl2.poset.name(y)});
  CHECK(got == std::set<std::pair<std::string, std::string>>{{"x1", "y1"}, {"x2", "y1"}});

  // x with two labelled partners decodes to nothing
  FiniteGraph g;
  for (const char* v : {"x", "y", "z", "a1", "d1", "b1", "c1", "a2", "d2", "b2", "c2"}) g.add_vertex(v);
  auto e = [&](const char* u, const char* v) { g.add_edge(*g.find(u), *g.find(v)); };
  for (auto [a, d, b, c, y] : {std::tuple{"a1", "d1", "b1", "c1", "y"}, std::tuple{"a2", "d2", "b2", "c2", "z"}}) {
    e("x", a);
    e(a, d);
    e(d, y);
    e(a, b);
    e(b, c);
    e(c, a);
  }
  auto twice = poset_from_graph(g);
  for (auto [x, y] : name_pairs(twice, twice.at("c"))) CHECK(twice.name(x) != "x");
}

TEST_CASE("light coded pairs") {
  auto lt = build_fixture("light-triple");
  const auto& p = lt.poset;
  std::set<std::pair<std::string, std::string>> got;
  for (auto [x, y] : light_coded_pairs(p, p.at("f"), p.at("id"))) got.insert({p.name(x), p.name(y)});
  CHECK(got == std::set<std::pair<std::string, std::string>>{{"p1", "p2"}, {"p3", "p4"}});
}

TEST_CASE("smc triples are invariant under automorphisms") {
  for (const auto& fam : fixture_families()) {
    CAPTURE(fam);
    auto fx = build_fixture(fam);
    const auto& p = fx.poset;
    std::set<std::tuple<std::size_t, std::size_t, std::size_t>> base;
    for (const auto& t : smc_pairs(p)) base.insert({t.cover, t.d, t.e});
    auto autos = automorphisms(p);
    CHECK_FALSE(autos.empty());
    for (const auto& pi : autos) {
      std::set<std::tuple<std::size_t, std::size_t, std::size_t>> moved;
      for (auto [a, d, e] : base) moved.insert({pi[a], std::min(pi[d], pi[e]), std::max(pi[d], pi[e])});
      CHECK(moved == base);
    }
  }
  // the double cover swaps a and b, and r1 and r2
  CHECK(automorphisms(build_fixture("double-cover").poset).size() == 4);
}

TEST_CASE("layout fixtures match the construction's own decoder") {
  const std::vector<std::pair<std::string, std::vector<std::pair<int, int>>>> graphs{
      {"P3", {{0, 1}, {1, 2}}}, {"C4", {{0, 1}, {1, 2}, {2, 3}, {0, 3}}},
      {"K4", {{0, 1}, {0, 2}, {0, 3}, {1, 2}, {1, 3}, {2, 3}}}, {"E3", {}}};
  for (const auto& [name, es] : graphs) {
    CAPTURE(name);
    const std::size_t n = name == "P3" || name == "E3" ? 3 : 4;
    FiniteGraph g(n);
    for (auto [a, b] : es) g.add_edge(a, b);
    auto res = construction::run(construction::GraphInput::from_finite(g), construction::make_family("id"), {}, 500);
    auto layout = construction::decode_layout_graph(res.final_state, n, 500);
    auto fx = layout_fixture(res.final_state, n);
    CHECK(check_fixture(fx).ok());
    const auto& p = fx.poset;
    auto d = decode_Gc(p, p.at("C"));
    REQUIRE(d.graph.size() == layout.size());
    std::set<std::pair<std::string, std::string>> want;
    for (auto [a, b] : layout.edges()) want.insert({"R" + std::to_string(a), "R" + std::to_string(b)});
    CHECK(named_edges(d.graph) == want);
    CHECK(layout == g);
  }
}

TEST_CASE("fixture json round trip") {
  for (const auto& fam : {"double-cover", "name-label", "light-triple"}) {
    auto fx = build_fixture(fam);
    auto back = fixture_from_json(to_json(fx));
    CHECK(back.family == fx.family);
    CHECK(back.designated == fx.designated);
    CHECK(back.expect_labels == fx.expect_labels);
    CHECK(back.expect_smc == fx.expect_smc);
    CHECK(back.poset.size() == fx.poset.size());
    for (std::size_t a = 0; a < fx.poset.size(); ++a)
      for (std::size_t b = 0; b < fx.poset.size(); ++b)
        CHECK(back.poset.leq(back.poset.at(fx.poset.name(a)), back.poset.at(fx.poset.name(b))) == fx.poset.leq(a, b));
  }
  auto j = to_json(build_fixture("double-cover"));
  j["designated"]["c"] = "nowhere";
  CHECK_THROWS_AS(fixture_from_json(j), std::invalid_argument);
}
