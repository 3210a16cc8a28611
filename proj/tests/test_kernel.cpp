#include <algorithm>
#include <numeric>
#include <set>

#include "ceerlab/ceer.hpp"
#include "doctest.h"
#include "oracles.hpp"

using namespace ceerlab;

namespace {

std::size_t classes_in_window(const FiniteCeer& c, Nat u) { return c.window(u).size(); }

}  // namespace

TEST_CASE("cantor pairing") {
  CHECK(pair(0, 0) == 0);
  CHECK(pair(1, 0) == 1);
  CHECK(pair(0, 1) == 2);
  CHECK(pair(2, 1) == 7);
  for (Nat z = 0; z < 5000; ++z) {
    auto [a, b] = unpair(z);
    REQUIRE(pair(a, b) == z);
  }
  CHECK(unpair(pair(123456, 789)) == std::pair<Nat, Nat>(123456, 789));
}

TEST_CASE("id_n") {
  CHECK(describe(id_n(3), 6) == "{0,3} {1,4} {2,5}");
  CHECK(id_n(1).num_classes() == 1);
  CHECK(classes_in_window(id_n(5), 5) == 5);
  CHECK_THROWS_AS(id_n(0), std::invalid_argument);
}

TEST_CASE("finite ceer construction rejects degenerate input") {
  CHECK_THROWS(FiniteCeer::from_labels({}));
  CHECK_THROWS(FiniteCeer::from_classes({{0}, {}}));
  CHECK_THROWS(FiniteCeer::from_classes({{0, 2}}));
  auto c = FiniteCeer::from_classes({{0, 1}, {2}});
  CHECK(c.num_classes() == 2);
  CHECK(c.equivalent(3, 4));  // periodic: 3 = 0 mod 3
  CHECK_THROWS(c.to_staged(0));
}

TEST_CASE("uniform join of finite ceers") {
  auto j = uniform_join(id_n(1), id_n(1));
  CHECK(j.num_classes() == 2);
  CHECK(finite_equiv(j, id_n(2)));

  // Id_2 (+) Id_3 on 0..9: evens by (x/2) mod 2, odds by ((x-1)/2) mod 3.
  auto k = uniform_join(id_n(2), id_n(3));
  std::set<std::pair<int, Nat>> keys;
  for (Nat x = 0; x < 10; ++x) keys.insert({int(x % 2), x % 2 == 0 ? (x / 2) % 2 : ((x - 1) / 2) % 3});
  CHECK(classes_in_window(k, 10) == keys.size());
  CHECK(keys.size() == 5);
  for (Nat x = 0; x < 40; ++x)
    for (Nat y = 0; y < 40; ++y) {
      bool expect = (x % 2 == y % 2) && (x % 2 == 0 ? (x / 2) % 2 == (y / 2) % 2 : (x / 2) % 3 == (y / 2) % 3);
      REQUIRE(k.equivalent(x, y) == expect);
    }
}

TEST_CASE("uniform join of staged ceers") {
  auto idj = uniform_join(identity_ceer(10), identity_ceer(10));
  CHECK(idj.class_count(3) == idj.universe_bound());

  auto a = id_n(2).to_staged(8), b = id_n(3).to_staged(8);
  auto j = uniform_join(a, b);
  CHECK(j.universe_bound() == 16);
  auto f = uniform_join(id_n(2), id_n(3));
  auto snap = j.snapshot(0);
  for (Nat x = 0; x < 16; ++x)
    for (Nat y = 0; y < 16; ++y) REQUIRE((snap[x] == snap[y]) == f.equivalent(x, y));
  CHECK(j.certified_separate(0, 1, 0));
  CHECK(j.certified_separate(0, 2, 0));
  CHECK_FALSE(j.certified_separate(0, 4, 0));
}

TEST_CASE("uniform_join_many") {
  CHECK(uniform_join_many({id_n(1), id_n(1), id_n(1)}).num_classes() == 3);
  CHECK_THROWS(uniform_join_many(std::vector<FiniteCeer>{}));
  auto one = uniform_join_many(std::vector<StagedCeer>{identity_ceer(12)});
  CHECK(one.class_count(0) == 12);

  // With two summands the interleaving x -> (x mod 2, x div 2) is the
  // even/odd join; check it against the two-argument join through an
  // explicit bijection on 0..19.
  auto m = uniform_join_many({id_n(2), id_n(3)});
  auto j = uniform_join(id_n(2), id_n(3));
  auto bij = [](Nat z) { return join_many_encode(z % 2, z / 2, 2); };
  std::vector<bool> hit(20, false);
  for (Nat z = 0; z < 20; ++z) {
    REQUIRE(bij(z) < 20);
    hit[bij(z)] = true;
  }
  CHECK(std::all_of(hit.begin(), hit.end(), [](bool b) { return b; }));
  for (Nat x = 0; x < 20; ++x)
    for (Nat y = 0; y < 20; ++y) REQUIRE(m.equivalent(bij(x), bij(y)) == j.equivalent(x, y));

  auto staged = uniform_join_many(std::vector<StagedCeer>{id_n(2).to_staged(10), id_n(3).to_staged(10),
                                                           identity_ceer(10)});
  for (Nat x = 0; x < staged.universe_bound(); ++x)
    for (Nat y = 0; y < staged.universe_bound(); ++y) {
      bool expect = x % 3 == y % 3 && ((x % 3 == 0 && (x / 3) % 2 == (y / 3) % 2) ||
                                       (x % 3 == 1 && (x / 3) % 3 == (y / 3) % 3) || x == y);
      REQUIRE(staged.equivalent(x, y, 0) == expect);
    }
}

TEST_CASE("restriction") {
  SUBCASE("Id_5 to the evens along 2x") {
    auto e = id_n(5).to_staged(20);
    auto w = CeSet::decidable([](Nat x) { return x % 2 == 0; });
    auto res = restriction(e, w, ReductionFn::parse("2*x"), 10);
    CHECK(res.warnings.empty());
    // oracle: x ~ y iff 2x = 2y mod 5
    std::vector<oracle::Nat> lab(10);
    for (Nat x = 0; x < 10; ++x) lab[x] = (2 * x) % 5;
    CHECK(oracle::same_partition(lab, res.ceer.snapshot(0)));
    CHECK(res.ceer.class_count(0) == 5);
  }
  SUBCASE("identity surjection gives E back") {
    auto e = uniform_join(id_n(2), id_n(3)).to_staged(12);
    auto res = restriction(e, CeSet::all(), ReductionFn::identity(), 12);
    CHECK(res.ceer.snapshot(0) == e.snapshot(0));
  }
  SUBCASE("constant map") {
    auto e = id_n(2).to_staged(4);
    auto res = restriction(e, CeSet::scripted({{0, 0}}), ReductionFn::parse("0"), 6);
    CHECK(res.ceer.class_count(0) == 1);
  }
  SUBCASE("h leaving W is a hard error") {
    auto e = id_n(2).to_staged(10);
    auto w = CeSet::decidable([](Nat x) { return x % 2 == 0; });
    CHECK_THROWS_AS(restriction(e, w, ReductionFn::parse("x"), 4), std::domain_error);
  }
  SUBCASE("non-surjective h only warns") {
    auto e = id_n(3).to_staged(9);
    auto res = restriction(e, CeSet::all(), ReductionFn::parse("x"), 4);
    CHECK(res.warnings.size() == 1);
  }
  SUBCASE("finite restriction along the increasing enumeration") {
    // Id_4 restricted to the residues {0, 1} mod 4 gives Id_2.
    auto r = restriction(id_n(4), std::vector<bool>{true, true, false, false});
    CHECK(r.num_classes() == 2);
    CHECK(finite_equiv(r, id_n(2)));
  }
}

TEST_CASE("quotient") {
  SUBCASE("Id by (0,1)") {
    auto q = quotient(identity_ceer(8), [](Stage s) { return s == 0 ? PairBatch{{0, 1}} : PairBatch{}; });
    auto cl = q.classes(0);
    CHECK(cl.size() == 7);
    CHECK(cl[0] == std::vector<Nat>{0, 1});
  }
  SUBCASE("Id_4 by (0,1),(1,2) on 0..7") {
    PairBatch w{{0, 1}, {1, 2}};
    auto q = quotient(id_n(4).to_staged(8), [w](Stage s) { return s == 0 ? w : PairBatch{}; });
    auto base = id_n(4).to_staged(8).batch(0);
    base.insert(base.end(), w.begin(), w.end());
    auto lab = oracle::closure_labels(8, base);
    CHECK(oracle::same_partition(lab, q.snapshot(0)));
    CHECK(oracle::count_distinct(lab) == 2);
    CHECK(quotient(id_n(4), w).num_classes() == 2);
  }
  SUBCASE("empty quotient") {
    auto e = id_n(3).to_staged(9);
    CHECK(quotient(e, nullptr).snapshot(0) == e.snapshot(0));
  }
}

TEST_CASE("column_code") {
  auto e = recorded_ceer(5, {{{1, 2}}});
  auto col = column_code(0, e);
  CHECK(col(0) == PairBatch{{pair(0, 1), pair(0, 2)}});
  auto col1 = column_code(1, id_n(1).to_staged(4));
  std::set<std::pair<Nat, Nat>> got;
  for (auto [x, y] : col1(0)) got.insert({std::min(x, y), std::max(x, y)});
  // closure of the emitted pairs is the full column {<1,x> : x < 4}
  std::vector<std::pair<oracle::Nat, oracle::Nat>> raw(col1(0).begin(), col1(0).end());
  std::vector<oracle::Nat> members{pair(1, 0), pair(1, 1), pair(1, 2), pair(1, 3)};
  auto lab = oracle::closure_labels(20, raw);
  for (auto a : members)
    for (auto b : members) CHECK(lab[a] == lab[b]);
}

TEST_CASE("iota") {
  auto i1 = iota(id_n(1).to_staged(16));
  CHECK(i1.equivalent(0, 2, 0));
  CHECK(i1.equivalent(0, 30, 0));
  CHECK_FALSE(i1.equivalent(1, 3, 0));

  // iota(iota(Id_1)) and iota(Id_1) reduce to each other on 0..31.
  auto ii1 = iota(iota(id_n(1).to_staged(64)));
  auto i1b = iota(id_n(1).to_staged(64));
  std::vector<Nat> f(32), g(32);
  for (Nat z = 0; z < 32; ++z) {
    f[z] = (z % 4 == 0) ? 0 : 2 * z + 1;  // 4N is the big class of ii1
    g[z] = (z % 2 == 0) ? 0 : 2 * z + 1;
  }
  auto v1 = check_reduction_window(Ceer(ii1), Ceer(i1b), ReductionFn::from_table(f), 32, 0);
  auto v2 = check_reduction_window(Ceer(i1b), Ceer(ii1), ReductionFn::from_table(g), 32, 0);
  CHECK(v1.ok());
  CHECK(v1.obligations.empty());
  CHECK(v2.ok());
  CHECK(v2.obligations.empty());

  // restricted to the evens, iota(X) is X
  auto x = uniform_join(id_n(2), id_n(3)).to_staged(12);
  auto ix = iota(x);
  for (Nat a = 0; a < 12; ++a)
    for (Nat b = 0; b < 12; ++b) REQUIRE(ix.equivalent(2 * a, 2 * b, 0) == x.equivalent(a, b, 0));
}

TEST_CASE("check_reduction_window") {
  auto v = check_reduction_window(Ceer(id_n(3)), Ceer(id_n(3)), ReductionFn::identity(), 9, 0);
  CHECK(v.ok());
  CHECK(v.obligations.empty());

  for (Nat a = 0; a < 2; ++a)
    for (Nat b = 0; b < 2; ++b)
      for (Nat c = 0; c < 2; ++c) {
        auto bad = check_reduction_window(Ceer(id_n(3)), Ceer(id_n(2)),
                                          ReductionFn::from_table({a, b, c}), 3, 0);
        CHECK(bad.kind == ReductionVerdict::Kind::HardViolation);
      }

  auto parity = ReductionFn::from_table({0, 1}, true);
  auto ok = check_reduction_window(Ceer(uniform_join(id_n(1), id_n(1))), Ceer(id_n(2)), parity, 20, 0);
  CHECK(ok.ok());
  CHECK(ok.obligations.empty());

  // Undecided sides produce pending obligations, never a violation.
  auto open = recorded_ceer(6, {{}});
  auto pending = check_reduction_window(Ceer(id_n(1).to_staged(6)), Ceer(open), ReductionFn::identity(), 6, 0);
  CHECK(pending.ok());
  CHECK(pending.obligations.size() == 15);
}

TEST_CASE("brute_force_reduces") {
  CHECK(brute_force_reduces(id_n(2), id_n(3)).reduces);
  CHECK_FALSE(brute_force_reduces(id_n(3), id_n(2)).reduces);
  auto r = FiniteCeer::from_classes({{0, 1}, {2}});
  auto res = brute_force_reduces(r, id_n(2));
  REQUIRE(res.reduces);
  REQUIRE(res.witness);
  auto v = check_reduction_window(Ceer(r), Ceer(id_n(2)), *res.witness, 30, 0);
  CHECK(v.ok());
  CHECK(v.obligations.empty());
}

TEST_CASE("brute force agrees with the class-count oracle") {
  std::vector<FiniteCeer> all;
  for (std::size_t n = 1; n <= 5; ++n)
    oracle::for_each_partition(n, 5, [&](const std::vector<std::size_t>& l) { all.push_back(FiniteCeer::from_labels(l)); });
  for (const auto& a : all)
    for (const auto& b : all) {
      auto res = brute_force_reduces(a, b);
      REQUIRE(res.reduces == (a.num_classes() <= b.num_classes()));
      if (res.reduces) {
        const Nat bound = std::lcm(a.period(), b.period()) * 2;
        REQUIRE(check_reduction_window(Ceer(a), Ceer(b), *res.witness, bound, 0).obligations.empty());
      }
    }
}

TEST_CASE("self-fullness shadow") {
  for (Nat n = 1; n <= 8; ++n) CHECK_FALSE(brute_force_reduces(id_n(n + 1), id_n(n)).reduces);
}

TEST_CASE("staged snapshots match a from-scratch closure") {
  oracle::Rng rng(7);
  for (int trial = 0; trial < 40; ++trial) {
    const Nat u = 5 + rng.below(30);
    std::vector<PairBatch> stages(1 + rng.below(12));
    for (auto& b : stages)
      for (Nat k = rng.below(4); k > 0; --k) b.emplace_back(rng.below(u + 3), rng.below(u + 3));
    auto c = recorded_ceer(u, stages);
    std::vector<std::pair<oracle::Nat, oracle::Nat>> acc;
    for (Stage s = 0; s < stages.size() + 2; ++s) {
      if (s < stages.size()) acc.insert(acc.end(), stages[s].begin(), stages[s].end());
      REQUIRE(oracle::same_partition(oracle::closure_labels(u, acc), c.snapshot(s)));
    }
    // going back in time replays from the merge log
    for (Stage s = 0; s < stages.size(); ++s) {
      std::vector<std::pair<oracle::Nat, oracle::Nat>> upto;
      for (Stage t = 0; t <= s; ++t) upto.insert(upto.end(), stages[t].begin(), stages[t].end());
      REQUIRE(oracle::same_partition(oracle::closure_labels(u, upto), c.snapshot(s)));
    }
    // monotonicity
    for (Stage s = 1; s < stages.size(); ++s)
      for (Nat x = 0; x < u; ++x)
        for (Nat y = 0; y < u; ++y)
          if (c.equivalent(x, y, s - 1)) REQUIRE(c.equivalent(x, y, s));
  }
}

TEST_CASE("inclusion reduction has no hard violations") {
  auto e = uniform_join(id_n(3), id_n(4)).to_staged(40);
  auto w = CeSet::decidable([](Nat x) { return x % 3 != 1; });
  // h enumerates W in increasing order: 0,2,3,5,6,...
  std::vector<Nat> table;
  for (Nat x = 0; table.size() < 20; ++x)
    if (x % 3 != 1) table.push_back(x);
  auto h = ReductionFn::from_table(table);
  auto res = restriction(e, w, h, 20);
  for (Nat b : {5, 10, 20})
    for (Stage s : {0, 1, 3}) {
      auto v = check_reduction_window(Ceer(res.ceer), Ceer(e), h, b, s);
      CHECK(v.ok());
      CHECK(v.obligations.empty());
    }
}

TEST_CASE("reduction expressions") {
  CHECK(ReductionFn::parse("2*x+1")(5) == 11);
  CHECK(ReductionFn::parse("x - 7")(3) == 0);
  CHECK(ReductionFn::parse("pair(3, x)")(4) == pair(3, 4));
  CHECK(ReductionFn::parse("fst(x)")(pair(9, 2)) == 9);
  CHECK(ReductionFn::parse("snd(x) * (x + 1)")(pair(1, 2)) == 2 * (pair(1, 2) + 1));
  auto f = ReductionFn::parse("x+1").with_table({7, 7});
  CHECK(f(0) == 7);
  CHECK(f(5) == 6);
  auto g = ReductionFn::compose(ReductionFn::parse("2*x"), ReductionFn::parse("x+3"));
  CHECK(g(1) == 8);
  CHECK_THROWS(ReductionFn::parse("y+1"));
  CHECK_THROWS(ReductionFn::from_table({1, 2})(2));
  CHECK(ReductionFn::from_table({4, 5}, true)(3) == 5);
}

TEST_CASE("CeSet") {
  auto w = CeSet::scripted({{5, 3}, {2, 1}, {5, 2}});
  CHECK(w.member(5, 2));
  CHECK_FALSE(w.member(5, 1));
  CHECK(w.settled_stage() == 2);
  CHECK(w.elements(1, 100) == std::vector<Nat>{2});
  CHECK(w.max_element() == 5u);
  for (Stage s = 0; s < 5; ++s)
    for (Nat x = 0; x < 7; ++x)
      if (w.member(x, s)) CHECK(w.member(x, s + 1));
}
