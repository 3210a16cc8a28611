#include "ceerlab/degree_probe.hpp"

#include <algorithm>
#include <set>
#include <stdexcept>

#include "ceerlab/interpretation.hpp"
#include "ceerlab/json_io.hpp"
#include "ceerlab/model_check.hpp"

namespace ceerlab::probe {

std::vector<std::size_t> minimal_elements(const FinitePoset& p) {
  auto bot = p.bottom();
  if (!bot) throw std::invalid_argument("minimal_elements: poset has no bottom");
  std::vector<std::size_t> out;
  for (std::size_t x = 0; x < p.size(); ++x)
    if (x != *bot && p.down(x).size() == 2) out.push_back(x);  // down() includes x itself
  return out;
}

std::vector<SmcTriple> smc_pairs(const FinitePoset& p) {
  std::vector<SmcTriple> out;
  for (std::size_t a = 0; a < p.size(); ++a) {
    const auto& below = p.down(a);
    for (std::size_t i = 0; i < below.size(); ++i) {
      const std::size_t d = below[i];
      if (d == a) continue;
      for (std::size_t j = i + 1; j < below.size(); ++j) {
        const std::size_t e = below[j];
        if (e == a || p.comparable(d, e)) continue;
        bool ok = true;
        for (std::size_t z : below)
          if (z != a && !p.leq(z, d) && !p.leq(z, e)) {
            ok = false;
            break;
          }
        if (ok) out.push_back({a, std::min(d, e), std::max(d, e)});
      }
    }
  }
  std::sort(out.begin(), out.end());
  return out;
}

DecodedGraph decode_Gc(const FinitePoset& p, std::size_t c, bool strip_isolated) {
  if (c >= p.size()) throw std::out_of_range("decode_Gc: no such element");
  std::vector<std::size_t> verts;
  for (std::size_t x : minimal_elements(p))
    if (p.leq(x, c)) verts.push_back(x);
  // covers below c, grouped by the pair they cover
  std::map<std::pair<std::size_t, std::size_t>, std::vector<std::size_t>> covers;
  for (const auto& t : smc_pairs(p))
    if (p.leq(t.cover, c)) covers[{t.d, t.e}].push_back(t.cover);
  std::set<std::pair<std::size_t, std::size_t>> edges;
  for (const auto& [de, cs] : covers) {
    bool two = false;
    for (std::size_t i = 0; i < cs.size() && !two; ++i)
      for (std::size_t j = i + 1; j < cs.size() && !two; ++j) two = !p.comparable(cs[i], cs[j]);
    if (two) edges.insert(de);
  }
  std::vector<std::size_t> keep;
  for (std::size_t v : verts) {
    if (!strip_isolated) {
      keep.push_back(v);
      continue;
    }
    for (const auto& [a, b] : edges)
      if ((a == v || b == v) && p.leq(a, c) && p.leq(b, c)) {
        keep.push_back(v);
        break;
      }
  }
  DecodedGraph out;
  std::map<std::size_t, std::size_t> index;
  for (std::size_t v : keep) {
    index[v] = out.graph.add_vertex(p.name(v));
    out.element.push_back(v);
  }
  for (const auto& [a, b] : edges) {
    auto ia = index.find(a), ib = index.find(b);
    if (ia != index.end() && ib != index.end()) out.graph.add_edge(ia->second, ib->second);
  }
  return out;
}

FinitePoset poset_from_graph(const FiniteGraph& g) {
  FinitePoset p;
  const std::size_t bot = p.add_element("0");
  std::vector<std::string> names(g.size());
  std::vector<std::size_t> vert(g.size());
  for (std::size_t v = 0; v < g.size(); ++v) {
    // default numeric names would clash with the bottom "0"
    const std::string& n = g.name(v);
    const bool numeric = !n.empty() && n.find_first_not_of("0123456789") == std::string::npos;
    names[v] = n.empty() || numeric || n == "c" ? "v" + n : n;
    vert[v] = p.add_element(names[v]);
    p.add_leq(bot, vert[v]);
  }
  std::vector<std::size_t> tops;
  for (auto [u, v] : g.edges()) {
    for (const char* side : {".a", ".b"}) {
      const std::size_t a = p.add_element(names[u] + "~" + names[v] + side);
      p.add_leq(vert[u], a);
      p.add_leq(vert[v], a);
      tops.push_back(a);
    }
  }
  const std::size_t top = p.add_element("c");
  for (std::size_t v : vert) p.add_leq(v, top);
  for (std::size_t a : tops) p.add_leq(a, top);
  p.add_leq(bot, top);
  p.close();
  return p;
}

std::vector<std::pair<std::size_t, std::size_t>> name_pairs(const FinitePoset& p, std::size_t f) {
  const DecodedGraph d = decode_Gc(p, f);
  const FiniteGraph& g = d.graph;
  const std::size_t n = g.size();
  auto label = [&](std::size_t x, std::size_t y) {
    for (std::size_t a : g.neighbours(x))
      for (std::size_t dd : g.neighbours(a))
        for (std::size_t b : g.neighbours(a))
          for (std::size_t cc : g.neighbours(b)) {
            if (!g.has_edge(dd, y) || !g.has_edge(cc, a)) continue;
            const std::set<std::size_t> six{x, y, a, dd, b, cc};
            if (six.size() == 6) return true;
          }
    return false;
  };
  std::vector<std::pair<std::size_t, std::size_t>> out;
  for (std::size_t x = 0; x < n; ++x) {
    std::vector<std::size_t> ys;
    for (std::size_t y = 0; y < n; ++y)
      if (label(x, y)) ys.push_back(y);
    if (ys.size() == 1) out.emplace_back(d.element[x], d.element[ys[0]]);
  }
  std::sort(out.begin(), out.end());
  return out;
}

std::vector<std::pair<std::size_t, std::size_t>> light_coded_pairs(const FinitePoset& p, std::size_t f,
                                                                   std::size_t id) {
  const std::size_t n = p.size();
  std::vector<bool> lmin(n, false);
  for (std::size_t x = 0; x < n; ++x) {
    if (!p.lt(id, x)) continue;
    bool empty = true;
    for (std::size_t z : p.down(x))
      if (z != x && p.lt(id, z)) empty = false;
    lmin[x] = empty;
  }
  // y covers x above id: [id, y) = [id, x]
  auto covers = [&](std::size_t y, std::size_t x) {
    if (!p.leq(id, x) || !p.lt(x, y)) return false;
    for (std::size_t z : p.down(y))
      if (z != y && p.leq(id, z) && !p.leq(z, x)) return false;
    return true;
  };
  std::set<std::pair<std::size_t, std::size_t>> out;
  for (std::size_t x = 0; x < n; ++x) {
    if (!p.lt(x, f)) continue;
    std::vector<std::size_t> mins;
    for (std::size_t z : p.down(x))
      if (lmin[z]) mins.push_back(z);
    if (mins.size() != 2) continue;
    bool chain = false;
    for (std::size_t y : p.up(x)) {
      if (!covers(y, x)) continue;
      for (std::size_t z : p.up(y))
        if (covers(z, y) && p.leq(z, f)) chain = true;
    }
    if (chain) out.insert({std::min(mins[0], mins[1]), std::max(mins[0], mins[1])});
  }
  return {out.begin(), out.end()};
}

// ---- fixtures -------------------------------------------------------------

namespace {

struct Builder {
  Fixture fx;
  std::size_t add(const std::string& name, std::initializer_list<std::string> below = {}) {
    const std::size_t v = fx.poset.add_element(name);
    for (const auto& b : below) fx.poset.add_leq(fx.poset.at(b), v);
    return v;
  }
  Fixture done() {
    fx.poset.close();
    return std::move(fx);
  }
};

FiniteGraph label_graph(const std::vector<std::pair<std::string, std::string>>& pairs,
                        const std::vector<std::string>& extra) {
  FiniteGraph g;
  auto vtx = [&](const std::string& s) {
    auto v = g.find(s);
    return v ? *v : g.add_vertex(s);
  };
  for (std::size_t k = 0; k < pairs.size(); ++k) {
    const std::string t = std::to_string(k + 1);
    const std::size_t x = vtx(pairs[k].first), y = vtx(pairs[k].second);
    const std::size_t a = vtx("a" + t), d = vtx("d" + t), b = vtx("b" + t), c = vtx("cc" + t);
    g.add_edge(x, a);
    g.add_edge(a, d);
    g.add_edge(d, y);
    g.add_edge(a, b);
    g.add_edge(b, c);
    g.add_edge(c, a);
  }
  for (const auto& e : extra) vtx(e);
  return g;
}

Fixture name_fixture(const std::string& family, const std::vector<std::pair<std::string, std::string>>& pairs,
                     const std::vector<std::string>& extra) {
  Fixture fx;
  fx.family = family;
  const FiniteGraph g = label_graph(pairs, extra);
  fx.poset = poset_from_graph(g);
  for (auto [u, v] : g.edges()) fx.expect_edges.push_back({g.name(u), g.name(v)});
  fx.designated = {{"bottom", "0"}, {"c", "c"}, {"f", "c"}};
  fx.label_kind = "dark";
  fx.expect_labels = pairs;
  return fx;
}

}  // namespace

std::vector<std::string> fixture_families() {
  return {"oplusISMC", "secondISMC", "double-cover", "single-cover", "name-label",
          "name-label-2", "light-triple", "Z-dark-join", "layout-P3"};
}

Fixture build_fixture(const std::string& family) {
  Builder b;
  b.fx.family = family;
  if (family == "oplusISMC") {
    b.add("0");
    b.add("r1", {"0"});
    b.add("r2", {"0"});
    b.add("r1+r2", {"r1", "r2"});
    b.fx.designated = {{"bottom", "0"}, {"c", "r1+r2"}};
    b.fx.expect_minimal = {"r1", "r2"};
    b.fx.expect_smc = {{"r1+r2", "r1", "r2"}};
    return b.done();
  }
  if (family == "secondISMC" || family == "double-cover") {
    const bool second = family == "secondISMC";
    const std::string a = second ? "r1+r2" : "a", q = second ? "(r1+r2)/q" : "b";
    b.add("0");
    b.add("r1", {"0"});
    b.add("r2", {"0"});
    b.add(a, {"r1", "r2"});
    b.add(q, {"r1", "r2"});
    b.add("c", {a, q});
    b.fx.designated = {{"bottom", "0"}, {"c", "c"}};
    b.fx.expect_minimal = {"r1", "r2"};
    // the top is itself a strongly minimal cover of the two incomparable covers
    b.fx.expect_smc = {{a, "r1", "r2"}, {q, "r1", "r2"}, {"c", a, q}};
    b.fx.expect_edges = {{"r1", "r2"}};
    return b.done();
  }
  if (family == "single-cover") {
    b.add("0");
    b.add("r1", {"0"});
    b.add("r2", {"0"});
    b.add("a", {"r1", "r2"});
    b.add("c", {"a"});
    b.fx.designated = {{"bottom", "0"}, {"c", "c"}};
    b.fx.expect_minimal = {"r1", "r2"};
    b.fx.expect_smc = {{"a", "r1", "r2"}};
    return b.done();
  }
  if (family == "Z-dark-join") {
    // r has a least upper bound with every s_k, so no pair involving r gets
    // two incomparable covers.
    b.add("0");
    b.add("r", {"0"});
    for (const char* s : {"s1", "s2", "s3"}) b.add(s, {"0"});
    for (const char* s : {"s1", "s2", "s3"}) b.add(std::string("r|") + s, {"r", s});
    b.add("c", {"r|s1", "r|s2", "r|s3"});
    b.fx.designated = {{"bottom", "0"}, {"c", "c"}, {"r", "r"}};
    b.fx.expect_minimal = {"r", "s1", "s2", "s3"};
    b.fx.expect_smc = {{"r|s1", "r", "s1"}, {"r|s2", "r", "s2"}, {"r|s3", "r", "s3"}};
    return b.done();
  }
  if (family == "name-label") return name_fixture(family, {{"x1", "y1"}}, {"y2"});
  if (family == "name-label-2") return name_fixture(family, {{"x1", "y1"}, {"x2", "y1"}}, {"y2"});
  if (family == "light-triple") {
    b.add("0");
    b.add("id", {"0"});
    for (const char* m : {"p1", "p2", "p3", "p4"}) b.add(m, {"id"});
    // coded: x < y < z <= f with each step a light cover
    for (auto [u, v] : std::vector<std::pair<std::string, std::string>>{{"p1", "p2"}, {"p3", "p4"}}) {
      const std::string t = u + v;
      b.add("x" + t, {u, v});
      b.add("y" + t, {"x" + t});
      b.add("z" + t, {"y" + t});
    }
    // distractor: one cover level only below f
    b.add("xp1p3", {"p1", "p3"});
    b.add("yp1p3", {"xp1p3"});
    b.add("f", {"zp1p2", "zp3p4", "yp1p3"});
    b.add("zp1p3", {"yp1p3"});  // exists, but not below f
    b.fx.designated = {{"bottom", "0"}, {"id", "id"}, {"f", "f"}};
    b.fx.label_kind = "light";
    b.fx.expect_labels = {{"p1", "p2"}, {"p3", "p4"}};
    return b.done();
  }
  if (family == "layout-P3") {
    FiniteGraph p3(3);
    p3.add_edge(0, 1);
    p3.add_edge(1, 2);
    auto res = construction::run(construction::GraphInput::from_finite(p3), construction::make_family("id"), {}, 500);
    Fixture fx = layout_fixture(res.final_state, 3);
    fx.family = family;
    return fx;
  }
  throw std::invalid_argument("unknown fixture family '" + family + "'");
}

Fixture layout_fixture(const construction::ConstructionState& st, Nat n) {
  using construction::Column;
  Builder b;
  b.fx.family = "layout";
  b.add("0");
  const Nat limit = construction::finite_index_limit(n);
  std::set<Nat> coded;
  for (const auto& c : st.layout)
    if (c.kind == Column::Kind::Coding && c.index < n) coded.insert(c.index);
  auto r = [](Nat v) { return "R" + std::to_string(v); };
  for (Nat v : coded) {
    b.add(r(v), {"0"});
    b.fx.expect_minimal.push_back(r(v));
  }
  std::set<std::pair<Nat, Nat>> edges;
  for (const auto& c : st.layout)
    if (c.kind == Column::Kind::QuotientEdge && c.index <= limit && coded.count(c.a) && coded.count(c.b))
      edges.insert({std::min(c.a, c.b), std::max(c.a, c.b)});
  std::vector<std::string> tops;
  for (Nat v : coded) tops.push_back(r(v));
  for (auto [x, y] : edges) {
    const std::string j = r(x) + "+" + r(y), q = "(" + j + ")/q";
    b.add(j, {r(x), r(y)});
    b.add(q, {r(x), r(y)});
    tops.push_back(j);
    tops.push_back(q);
    b.fx.expect_edges.push_back({r(x), r(y)});
  }
  const std::size_t top = b.add("C");
  for (const auto& t : tops) b.fx.poset.add_leq(b.fx.poset.at(t), top);
  b.fx.designated = {{"bottom", "0"}, {"c", "C"}};
  return b.done();
}

// ---- cross-validation -----------------------------------------------------

namespace {

std::string pair_text(const std::string& a, const std::string& b) { return "(" + a + ", " + b + ")"; }

template <class T>
std::vector<T> sorted(std::vector<T> v) {
  std::sort(v.begin(), v.end());
  return v;
}

}  // namespace

FixtureCheck check_fixture(const Fixture& fx) {
  using logic::ModelChecker;
  using logic::Structure;
  FixtureCheck out;
  const FinitePoset& p = fx.poset;
  auto role = [&](const std::string& r) -> std::size_t {
    auto it = fx.designated.find(r);
    if (it == fx.designated.end()) throw std::invalid_argument("fixture lacks designated element '" + r + "'");
    return p.at(it->second);
  };
  auto mismatch = [&](const std::string& what) { out.mismatches.push_back(fx.family + ": " + what); };
  auto names_of = [&](const std::vector<std::size_t>& v) {
    std::vector<std::string> s;
    for (auto x : v) s.push_back(p.name(x));
    return sorted(s);
  };

  const auto mins = minimal_elements(p);
  out.lines.push_back("minimal: " + std::to_string(mins.size()));
  if (!fx.expect_minimal.empty() && names_of(mins) != sorted(fx.expect_minimal))
    mismatch("minimal elements differ from expectation");

  const auto smc = smc_pairs(p);
  out.lines.push_back("smc triples: " + std::to_string(smc.size()));
  if (!fx.expect_smc.empty()) {
    std::vector<std::array<std::string, 3>> got, want;
    for (const auto& t : smc) {
      std::string d = p.name(t.d), e = p.name(t.e);
      if (e < d) std::swap(d, e);
      got.push_back({p.name(t.cover), d, e});
    }
    for (auto t : fx.expect_smc) {
      if (t[2] < t[1]) std::swap(t[1], t[2]);
      want.push_back(t);
    }
    if (sorted(got) != sorted(want)) mismatch("smc triples differ from expectation");
  }

  const interp::PosetMacros m = interp::poset_macros();
  const Structure S = Structure::poset(p);

  if (fx.designated.count("c")) {
    const std::size_t c = role("c");
    const DecodedGraph d = decode_Gc(p, c);
    std::set<std::pair<std::string, std::string>> scan, want;
    for (auto [a, b2] : d.graph.edges()) {
      std::string x = p.name(d.element[a]), y = p.name(d.element[b2]);
      scan.insert({std::min(x, y), std::max(x, y)});
    }
    for (auto [x, y] : fx.expect_edges) want.insert({std::min(x, y), std::max(x, y)});
    out.lines.push_back("G_c: " + std::to_string(d.graph.size()) + " vertices, " + std::to_string(scan.size()) +
                        " edges");
    if (scan != want) mismatch("decoded edges differ from expectation");
    ModelChecker mc(S, m.edge({"x", "y", "c"}));
    std::size_t agree = 0;
    for (std::size_t x = 0; x < p.size(); ++x)
      for (std::size_t y = 0; y < p.size(); ++y) {
        const bool formula = mc.eval({{"x", x}, {"y", y}, {"c", c}});
        const bool direct = scan.count({std::min(p.name(x), p.name(y)), std::max(p.name(x), p.name(y))}) > 0;
        if (formula != direct) mismatch("E macro disagrees with the scan on " + pair_text(p.name(x), p.name(y)));
        else ++agree;
      }
    out.lines.push_back("E macro agrees on " + std::to_string(agree) + " pairs");
  }

  if (fx.label_kind == "dark") {
    const std::size_t f = role("f");
    const interp::NameFormulas nf = interp::name_formulas();
    ModelChecker mc(S, nf.name_decodes({"f", "x", "y"}));
    std::set<std::pair<std::string, std::string>> scan, formula, want(fx.expect_labels.begin(), fx.expect_labels.end());
    for (auto [x, y] : name_pairs(p, f)) scan.insert({p.name(x), p.name(y)});
    for (std::size_t x = 0; x < p.size(); ++x)
      for (std::size_t y = 0; y < p.size(); ++y)
        if (mc.eval({{"f", f}, {"x", x}, {"y", y}})) formula.insert({p.name(x), p.name(y)});
    out.lines.push_back("name pairs: " + std::to_string(formula.size()));
    if (scan != want) mismatch("name scan differs from expectation");
    if (formula != want) mismatch("NameDecodes differs from expectation");
  } else if (fx.label_kind == "light") {
    const std::size_t f = role("f"), id = role("id");
    ModelChecker mc(S, m.light_pair_coded({"f", "x", "y", "i"}));
    std::set<std::pair<std::string, std::string>> scan, formula, want;
    for (auto [x, y] : fx.expect_labels) want.insert({std::min(x, y), std::max(x, y)});
    for (auto [x, y] : light_coded_pairs(p, f, id)) {
      auto a = p.name(x), b2 = p.name(y);
      scan.insert({std::min(a, b2), std::max(a, b2)});
    }
    for (std::size_t x = 0; x < p.size(); ++x)
      for (std::size_t y = 0; y < p.size(); ++y)
        if (mc.eval({{"f", f}, {"x", x}, {"y", y}, {"i", id}}))
          formula.insert({std::min(p.name(x), p.name(y)), std::max(p.name(x), p.name(y))});
    out.lines.push_back("light coded pairs: " + std::to_string(formula.size()));
    if (scan != want) mismatch("light scan differs from expectation");
    if (formula != want) mismatch("LightPairCoded differs from expectation");
  }
  return out;
}

nlohmann::json to_json(const Fixture& fx) {
  nlohmann::json j = io::to_json(fx.poset);
  j["family"] = fx.family;
  j["designated"] = fx.designated;
  nlohmann::json e;
  e["minimal"] = fx.expect_minimal;
  e["smc"] = fx.expect_smc;
  e["edges"] = fx.expect_edges;
  e["label_kind"] = fx.label_kind;
  e["labels"] = fx.expect_labels;
  j["expect"] = e;
  return j;
}

Fixture fixture_from_json(const nlohmann::json& j) {
  Fixture fx;
  fx.poset = io::poset_from_json(j);
  fx.family = j.value("family", std::string("custom"));
  if (j.contains("designated")) fx.designated = j.at("designated").get<std::map<std::string, std::string>>();
  for (const auto& [k, v] : fx.designated)
    if (!fx.poset.find(v)) throw std::invalid_argument("designated " + k + " names an unknown element '" + v + "'");
  if (j.contains("expect")) {
    const auto& e = j.at("expect");
    fx.expect_minimal = e.value("minimal", std::vector<std::string>{});
    fx.expect_smc = e.value("smc", std::vector<std::array<std::string, 3>>{});
    fx.expect_edges = e.value("edges", std::vector<std::pair<std::string, std::string>>{});
    fx.label_kind = e.value("label_kind", std::string());
    fx.expect_labels = e.value("labels", std::vector<std::pair<std::string, std::string>>{});
  }
  return fx;
}

}  // namespace ceerlab::probe
