#include "ceerlab/verify.hpp"

#include <algorithm>
#include <bit>
#include <functional>
#include <numeric>
#include <optional>
#include <random>
#include <set>
#include <sstream>
#include <stdexcept>

#include "ceerlab/degree_probe.hpp"
#include "ceerlab/interpretation.hpp"
#include "ceerlab/model_check.hpp"
#include "ceerlab/names.hpp"

namespace ceerlab::verify {

namespace {

constexpr std::size_t kKeepCounterexamples = 5;

// mt19937_64 output is fixed by the standard; distributions are not, so
// draws use plain modular reduction.
struct Draw {
  std::mt19937_64 gen;
  explicit Draw(std::uint64_t seed) : gen(seed) {}
  std::uint64_t below(std::uint64_t n) { return gen() % n; }
};

void fail(FactTally& t, const std::string& what) {
  ++t.failures;
  if (t.counterexamples.size() < kKeepCounterexamples) t.counterexamples.push_back(what);
}

std::string show(const FiniteCeer& c) { return describe(c, c.period()); }

bool equiv_plus(const FiniteCeer& a, Nat k, const FiniteCeer& b) {
  return k == 0 ? finite_equiv(a, b) : finite_equiv(uniform_join(a, id_n(k)), b);
}

// Members of each class inside one period, by label.
std::vector<std::vector<Nat>> members(const FiniteCeer& c) {
  std::vector<std::vector<Nat>> m(c.num_classes());
  for (Nat x = 0; x < c.period(); ++x) m[c.label(x)].push_back(x);
  return m;
}

// A periodic reduction table from `from` into `to` sending classes through a
// seeded injection and each point to a seeded member of its target class.
// Empty when `to` has too few classes.
std::vector<Nat> random_reduction(const FiniteCeer& from, const FiniteCeer& to, Draw& rng) {
  if (from.num_classes() > to.num_classes()) return {};
  std::vector<std::size_t> target(to.num_classes());
  std::iota(target.begin(), target.end(), std::size_t{0});
  for (std::size_t i = target.size(); i > 1; --i) std::swap(target[i - 1], target[rng.below(i)]);
  const auto m = members(to);
  std::vector<Nat> table(from.period());
  for (Nat x = 0; x < from.period(); ++x) {
    const auto& cls = m[target[from.label(x)]];
    table[x] = cls[rng.below(cls.size())];
  }
  return table;
}

// Every pair (a, b) from the small stratum, then each ceer with seeded
// partners from the whole list.
void for_each_pairing(const std::vector<FiniteCeer>& all, const KernelFactsConfig& cfg, Draw& rng,
                      const std::function<void(const FiniteCeer&, const FiniteCeer&)>& fn) {
  std::size_t small = 0;
  while (small < all.size() && all[small].period() <= cfg.exhaustive_period) ++small;
  for (std::size_t a = 0; a < small; ++a)
    for (std::size_t b = 0; b < small; ++b) fn(all[a], all[b]);
  for (std::size_t a = small; a < all.size(); ++a)
    for (std::size_t p = 0; p < cfg.partners; ++p) {
      const auto& b = all[rng.below(all.size())];
      if (p % 2 == 0) {
        fn(all[a], b);
      } else {
        fn(b, all[a]);
      }
    }
}

FactTally cancellation(const std::vector<FiniteCeer>& all, const KernelFactsConfig& cfg) {
  FactTally t{"cancellation", 0, {}, 0};
  Draw rng(cfg.seed ^ 0x11);
  const Nat top_k = std::max<Nat>(cfg.max_k, 4);
  for_each_pairing(all, cfg, rng, [&](const FiniteCeer& s, const FiniteCeer& u) {
    const bool base = finite_equiv(s, u);
    for (Nat k = 1; k <= top_k; ++k) {
      ++t.instances;
      if (finite_equiv(uniform_join(s, id_n(k)), uniform_join(u, id_n(k))) != base)
        fail(t, "S=" + show(s) + " T=" + show(u) + " k=" + std::to_string(k));
    }
  });
  return t;
}

FactTally omitted_classes(const std::vector<FiniteCeer>& all, const KernelFactsConfig& cfg) {
  FactTally t{"omitted-classes", 0, {}, 0};
  Draw rng(cfg.seed ^ 0x22);
  for_each_pairing(all, cfg, rng, [&](const FiniteCeer& r, const FiniteCeer& s) {
    auto table = random_reduction(r, s, rng);
    if (table.empty()) return;
    const auto f = ReductionFn::from_table(table, true);
    // f and R both repeat with R's period, so one period decides it
    if (!check_reduction_window(r, s, f, r.period(), 0).ok()) {
      fail(t, "witness is not a reduction: R=" + show(r) + " S=" + show(s));
      return;
    }
    std::set<std::size_t> hit;
    for (Nat x : table) hit.insert(s.label(x));
    const Nat k = s.num_classes() - hit.size();
    if (k > cfg.max_k) return;
    ++t.instances;
    if (!equiv_plus(r, k, s)) fail(t, "R=" + show(r) + " S=" + show(s) + " k=" + std::to_string(k));
  });
  return t;
}

FactTally restriction_law(const std::vector<FiniteCeer>& all, const KernelFactsConfig& cfg) {
  FactTally t{"restriction", 0, {}, 0};
  for (const auto& e : all) {
    const std::size_t c = e.num_classes();
    const auto m = members(e);
    // subsets of classes of size at most max_k, leaving at least one class
    for (std::uint32_t mask = 0; mask < (1u << c); ++mask) {
      const Nat k = std::popcount(mask);
      if (k > cfg.max_k || k >= c) continue;
      std::vector<bool> full(e.period()), sparse(e.period(), false);
      for (Nat x = 0; x < e.period(); ++x) full[x] = !(mask >> e.label(x) & 1);
      for (std::size_t cl = 0; cl < c; ++cl)
        if (!(mask >> cl & 1)) sparse[m[cl].front()] = true;
      for (const auto* w : {&full, &sparse}) {
        ++t.instances;
        if (!equiv_plus(restriction(e, *w), k, e))
          fail(t, "E=" + show(e) + " omitted-mask=" + std::to_string(mask));
      }
    }
  }
  return t;
}

FactTally decomposition(const std::vector<FiniteCeer>& all, const KernelFactsConfig& cfg) {
  FactTally t{"decomposition", 0, {}, 0};
  Draw rng(cfg.seed ^ 0x33);
  std::size_t small = 0;
  while (small < all.size() && all[small].period() <= 4) ++small;
  for (const auto& x : all) {
    for (std::size_t p = 0; p < cfg.partners; ++p) {
      const auto& r1 = all[rng.below(small)];
      const auto& r2 = all[rng.below(small)];
      const auto j = uniform_join(r1, r2);
      auto table = random_reduction(x, j, rng);
      if (table.empty()) continue;
      ++t.instances;
      std::vector<bool> even(x.period()), odd(x.period());
      for (Nat v = 0; v < x.period(); ++v) {
        even[v] = table[v] % 2 == 0;
        odd[v] = !even[v];
      }
      const bool has_even = std::count(even.begin(), even.end(), true) > 0;
      const bool has_odd = std::count(odd.begin(), odd.end(), true) > 0;
      bool ok = true;
      std::optional<FiniteCeer> x1, x2;
      if (has_even) {
        x1 = restriction(x, even);
        ok = ok && brute_force_reduces(*x1, r1, false).reduces;
      }
      if (has_odd) {
        x2 = restriction(x, odd);
        ok = ok && brute_force_reduces(*x2, r2, false).reduces;
      }
      if (x1 && x2) {
        ok = ok && finite_equiv(x, uniform_join(*x1, *x2));
      } else {
        ok = ok && finite_equiv(x, x1 ? *x1 : *x2);
      }
      if (!ok) fail(t, "X=" + show(x) + " R1=" + show(r1) + " R2=" + show(r2));
    }
  }
  return t;
}

}  // namespace

std::vector<FiniteCeer> all_finite_ceers(Nat max_period, std::size_t max_classes) {
  std::vector<FiniteCeer> out;
  for (Nat n = 1; n <= max_period; ++n) {
    std::vector<std::size_t> a(n, 0);
    std::function<void(std::size_t, std::size_t)> rec = [&](std::size_t i, std::size_t used) {
      if (i == n) {
        out.push_back(FiniteCeer::from_labels(a));
        return;
      }
      for (std::size_t v = 0; v <= used && v < max_classes; ++v) {
        a[i] = v;
        rec(i + 1, v == used ? used + 1 : used);
      }
    };
    rec(1, 1);
  }
  return out;
}

std::vector<FactTally> kernel_facts(const KernelFactsConfig& cfg) {
  const auto all = all_finite_ceers(cfg.max_period, cfg.max_classes);
  return {cancellation(all, cfg), omitted_classes(all, cfg), restriction_law(all, cfg), decomposition(all, cfg)};
}

// ---- construction scenarios --------------------------------------------------

std::vector<NamedGraph> acceptance_graphs() {
  auto make = [](std::size_t n, std::vector<std::pair<std::size_t, std::size_t>> es) {
    FiniteGraph g(n);
    for (auto [a, b] : es) g.add_edge(a, b);
    return g;
  };
  names::PairSet f;
  f.pairs.push_back({{"x", identity_ceer(1)}, {"y", identity_ceer(1)}});
  return {{"E3", make(3, {})},
          {"P3", make(3, {{0, 1}, {1, 2}})},
          {"C4", make(4, {{0, 1}, {1, 2}, {2, 3}, {3, 0}})},
          {"K4", make(4, {{0, 1}, {0, 2}, {0, 3}, {1, 2}, {1, 3}, {2, 3}})},
          {"label", names::expected_label_graph(f)}};
}

std::vector<CeSet> scripted_ws(std::uint64_t seed, std::size_t count) {
  Draw rng(seed);
  std::vector<CeSet> ws;
  for (std::size_t j = 0; j < count; ++j) {
    const Nat c1 = 8 + rng.below(50), c2 = 8 + rng.below(50);
    const Stage t = 5 + rng.below(145);
    const Nat p1 = rng.below(4);
    const Nat p2 = c1 == c2 ? p1 + 1 + rng.below(3) : rng.below(4);
    ws.push_back(CeSet::scripted({{pair(c1, p1), t}, {pair(c2, p2), t + rng.below(3)}}));
  }
  return ws;
}

std::vector<DarkScenario> dark_scenarios(std::uint64_t seed) {
  Draw rng(seed ^ 0x44);
  const auto graphs = acceptance_graphs();
  const std::vector<std::string> families{"id", "mod", "idn:2", "random:" + std::to_string(seed % 1000)};
  std::vector<DarkScenario> out;
  for (std::size_t k = 0; k < 20; ++k) {
    DarkScenario sc;
    sc.graph = graphs[k % graphs.size()].graph;
    sc.family = families[k % families.size()];
    sc.name = "scenario-" + std::to_string(k) + "/" + graphs[k % graphs.size()].name + "/" + sc.family;
    const std::size_t count = 1 + rng.below(5);
    for (std::size_t j = 0; j < count; ++j) {
      const Stage t = 1 + rng.below(150);
      switch (rng.below(4)) {
        case 0: {  // two elements in fresh columns
          const Nat c1 = 6 + rng.below(50), c2 = 6 + rng.below(50);
          const Nat p2 = c1 == c2 ? 1 + rng.below(3) : rng.below(3);
          sc.ws.push_back(CeSet::scripted({{pair(c1, 0), t}, {pair(c2, p2), t + rng.below(20)}}));
          break;
        }
        case 1:  // column 0 stays restrained for every j
          sc.ws.push_back(CeSet::scripted({{pair(0, 1), t}, {pair(0, 3), t + 1}}));
          break;
        case 2:  // collapsed inside a coding column when the family is Id_2
          sc.ws.push_back(CeSet::scripted({{pair(0, 0), t}, {pair(0, 2), t}}));
          break;
        default:  // a lone element never requires attention
          sc.ws.push_back(CeSet::scripted({{pair(6 + rng.below(50), rng.below(3)), t}}));
          break;
      }
    }
    out.push_back(std::move(sc));
  }
  return out;
}

std::map<Nat, std::size_t> gamma_change_counts(const construction::Trace& t) {
  std::map<Nat, std::size_t> changes;
  std::map<Nat, Nat> prev;
  for (const auto& rec : t.stages) {
    for (auto [i, v] : rec.gamma) {
      auto it = prev.find(i);
      if (it == prev.end() || it->second != v) ++changes[i];
    }
    prev = rec.gamma;
  }
  return changes;
}

std::map<Nat, std::size_t> actions_below(const construction::Trace& t, Nat limit) {
  std::map<Nat, std::size_t> out;
  for (Nat i = 0; i < limit; ++i) out[i] = 0;
  for (const auto& rec : t.stages)
    if (rec.dark)
      for (Nat i = *rec.dark + 1; i < limit; ++i) ++out[i];
  return out;
}

// ---- reports -----------------------------------------------------------------

bool Report::ok() const {
  return std::all_of(checks.begin(), checks.end(), [](const Check& c) { return c.pass; });
}

std::string Report::text() const {
  std::ostringstream os;
  os << "ceerlab verify suite=" << suite << " seed=" << seed << '\n';
  std::size_t passed = 0;
  for (const auto& c : checks) {
    passed += c.pass;
    os << (c.pass ? "PASS " : "FAIL ") << c.name;
    if (!c.detail.empty()) os << ": " << c.detail;
    os << '\n';
  }
  os << "summary: " << passed << "/" << checks.size() << " passed, " << (ok() ? "OK" : "FAILED") << '\n';
  return os.str();
}

namespace {

void kernel_suite(Report& rep) {
  KernelFactsConfig cfg;
  cfg.seed = rep.seed;
  for (const auto& t : kernel_facts(cfg)) {
    std::string detail = "instances=" + std::to_string(t.instances) + " counterexamples=" + std::to_string(t.failures);
    for (const auto& c : t.counterexamples) detail += "; " + c;
    rep.checks.push_back({"kernel." + t.fact, t.failures == 0 && t.instances > 0, detail});
  }
  std::string bad;
  for (Nat n = 1; n <= 8; ++n)
    if (brute_force_reduces(id_n(n + 1), id_n(n), false).reduces) bad += " n=" + std::to_string(n);
  rep.checks.push_back({"kernel.self-fullness", bad.empty(), bad.empty() ? "Id_{n+1} <= Id_n fails for n=1..8" : bad});
}

void construction_suite(Report& rep) {
  using namespace construction;
  constexpr Stage kStages = 500;
  std::size_t g_index = 0;
  for (const auto& [name, g] : acceptance_graphs()) {
    for (bool finite : {true, false}) {
      Config cfg;
      cfg.finite_mode = finite;
      const auto ws = finite ? std::vector<CeSet>{} : scripted_ws(rep.seed + g_index, 4);
      auto res = run(GraphInput::from_finite(g), make_family("mod"), ws, kStages, cfg);
      const std::string tag = name + (finite ? ",finite" : ",full");
      std::string detail;
      bool ok = false;
      try {
        ok = decode_layout_graph(res.final_state, g.size(), kStages) == g;
        detail = ok ? "decoded graph equals input" : "decoded graph differs";
      } catch (const std::exception& e) {
        detail = e.what();
      }
      rep.checks.push_back({"construction.roundtrip[" + tag + "]", ok, detail});

      auto changes = gamma_change_counts(res.trace);
      auto below = actions_below(res.trace, 5);
      std::string worst;
      bool stable = true;
      for (Nat i = 0; i < 5; ++i) {
        worst += (i ? " " : "") + std::to_string(changes[i]) + "<=" + std::to_string(below[i] + 1);
        stable = stable && changes[i] <= below[i] + 1;
      }
      rep.checks.push_back({"construction.stabilization[" + tag + "]", stable, "gamma_0..4 changes " + worst});
      if (!finite) {
        auto dark = verify_dark_satisfaction(res.trace, ws, ws.size());
        rep.checks.push_back({"construction.dark[" + tag + "]", dark.ok(),
                              std::to_string(dark.violations.size()) + " violations"});
      }
    }
    ++g_index;
  }
  for (const auto& sc : dark_scenarios(rep.seed)) {
    Config cfg;
    cfg.finite_mode = false;
    auto res = run(GraphInput::from_finite(sc.graph), make_family(sc.family), sc.ws, sc.stages, cfg);
    auto dark = verify_dark_satisfaction(res.trace, sc.ws, sc.ws.size());
    std::string detail;
    for (const auto& o : dark.outcomes) detail += (detail.empty() ? "" : " ") + to_string(o.kind);
    detail += "; " + std::to_string(dark.violations.size()) + " violations";
    if (!dark.ok()) detail += "; " + dark.violations.front();
    rep.checks.push_back({"construction.dark[" + sc.name + "]", dark.ok(), detail});
  }
}

void interpretation_suite(Report& rep) {
  using namespace logic;
  constexpr Nat kN = 20;
  auto gg = interp::build_gadget_graph(kN);
  auto df = interp::defining_formulas();
  auto m = Structure::graph(gg.graph);
  ModelChecker plus(m, df.phi_plus({"x", "y", "z"})), times(m, df.phi_times({"x", "y", "z"}));
  std::size_t bad_plus = 0, bad_times = 0, bad_unique = 0;
  const auto& e = gg.element;
  for (Nat a = 0; a <= kN; ++a)
    for (Nat b = 0; b <= kN; ++b)
      for (Nat c = 0; c <= kN; ++c) {
        bad_plus += plus.eval_tuple({e[a], e[b], e[c]}) != (a + b == c);
        bad_times += times.eval_tuple({e[a], e[b], e[c]}) != (a * b == c);
      }
  for (Nat a = 0; a <= kN; ++a)
    for (Nat b = 0; a + b <= kN; ++b) {
      std::size_t hits = 0;
      for (std::size_t z = 0; z < gg.graph.size(); ++z) hits += plus.eval_tuple({e[a], e[b], z});
      bad_unique += hits != 1;
    }
  const std::string sz = "N=20, " + std::to_string(gg.graph.size()) + " vertices";
  rep.checks.push_back({"interpretation.phi_plus", bad_plus == 0, sz + ", mismatches=" + std::to_string(bad_plus)});
  rep.checks.push_back({"interpretation.phi_times", bad_times == 0, sz + ", mismatches=" + std::to_string(bad_times)});
  rep.checks.push_back({"interpretation.unique_sum", bad_unique == 0, "pairs without a unique z=" + std::to_string(bad_unique)});

  const auto corpus = interp::arithmetic_corpus();
  const Nat frag = interp::corpus_fragment(corpus);
  auto cg = interp::build_gadget_graph(frag);
  auto gm = Structure::graph(cg.graph);
  auto am = Structure::arithmetic(frag);
  std::size_t agree = 0, truths = 0;
  std::string disagreements;
  for (const auto& s : corpus) {
    const bool direct = model_check(s.sentence, am);
    const bool via_graph = model_check(interp::arith_to_graph(s.sentence), gm);
    truths += direct;
    if (direct == via_graph) {
      ++agree;
    } else {
      disagreements += " [" + s.text + "]";
    }
  }
  rep.checks.push_back({"interpretation.corpus", agree == corpus.size(),
                        std::to_string(agree) + "/" + std::to_string(corpus.size()) + " agree on fragment N=" +
                            std::to_string(frag) + ", " + std::to_string(truths) + " true" + disagreements});
}

void probe_suite(Report& rep) {
  for (const auto& fam : probe::fixture_families()) {
    auto fx = probe::build_fixture(fam);
    auto chk = probe::check_fixture(fx);
    std::string detail = std::to_string(chk.lines.size()) + " checks";
    for (const auto& mm : chk.mismatches) detail += "; " + mm;
    rep.checks.push_back({"probe.fixture[" + fam + "]", chk.ok(), detail});
  }
  auto edges_of = [](const std::string& fam) {
    auto fx = probe::build_fixture(fam);
    return probe::decode_Gc(fx.poset, fx.poset.at(fx.designated.at("c"))).graph.edge_count();
  };
  const auto dc = edges_of("double-cover"), sc = edges_of("single-cover"), zd = edges_of("Z-dark-join");
  rep.checks.push_back({"probe.edges", dc == 1 && sc == 0 && zd == 0,
                        "double-cover=" + std::to_string(dc) + " single-cover=" + std::to_string(sc) +
                            " Z-dark-join=" + std::to_string(zd)});
}

}  // namespace

std::vector<std::string> suite_names() { return {"kernel", "construction", "interpretation", "probe", "all"}; }

Report run_suite(const std::string& suite, std::uint64_t seed) {
  Report rep;
  rep.suite = suite;
  rep.seed = seed;
  const bool all = suite == "all";
  bool known = all;
  if (all || suite == "kernel") kernel_suite(rep), known = true;
  if (all || suite == "construction") construction_suite(rep), known = true;
  if (all || suite == "interpretation") interpretation_suite(rep), known = true;
  if (all || suite == "probe") probe_suite(rep), known = true;
  if (!known) throw std::invalid_argument("unknown suite: " + suite);
  return rep;
}

}  // namespace ceerlab::verify
