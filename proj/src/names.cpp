#include "ceerlab/names.hpp"

#include <set>
#include <stdexcept>

namespace ceerlab::names {

namespace {

// Edge summands in the order they follow the six vertex summands.
// Roles: 0 = x, 1 = a, 2 = d, 3 = y, 4 = b, 5 = c.
constexpr std::array<std::pair<int, int>, 6> kEdgeRoles{{{0, 1}, {1, 2}, {2, 3}, {1, 4}, {4, 5}, {1, 5}}};

// The pair is read in the join itself: an even element from u and an odd
// one from v, as in (U (+) V)/(0,1).
StagedCeer quotiented_join(const StagedCeer& u, const StagedCeer& v, Edge pair) {
  return quotient(uniform_join(u, v), [pair](Stage s) { return s == 0 ? PairBatch{pair} : PairBatch{}; });
}

}  // namespace

ZResult build_Z(const NamedCeer& x, const NamedCeer& y, const std::vector<NamedCeer>& fresh,
                Edge quotient_pair) {
  if (fresh.size() < 4) throw std::invalid_argument("build_Z needs four fresh ceers");
  if (quotient_pair.first % 2 != 0 || quotient_pair.second % 2 != 1)
    throw std::invalid_argument("quotient pair must be (even, odd)");
  std::set<std::string> ids{x.id, y.id};
  for (std::size_t k = 0; k < 4; ++k)
    if (!ids.insert(fresh[k].id).second)
      throw std::invalid_argument("fresh ceer id " + fresh[k].id + " is not new");

  const std::array<const NamedCeer*, 6> role{&x, &fresh[0], &fresh[3], &y, &fresh[1], &fresh[2]};
  std::vector<StagedCeer> parts;
  ZResult out{identity_ceer(1), {}};
  for (const auto* r : role) {
    parts.push_back(r->ceer);
    out.summands.push_back({Summand::Kind::Vertex, r->id, {}, 0});
  }
  for (auto [i, j] : kEdgeRoles) {
    parts.push_back(quotiented_join(role[i]->ceer, role[j]->ceer, quotient_pair));
    out.summands.push_back({Summand::Kind::Edge, role[i]->id, role[j]->id, 0});
  }
  out.ceer = uniform_join_many(parts);
  return out;
}

FreshSupply default_fresh_supply(Nat universe) {
  return [universe](std::size_t k) { return NamedCeer{"g" + std::to_string(k), identity_ceer(universe)}; };
}

NameResult build_name(const PairSet& f, const FreshSupply& fresh, Edge quotient_pair) {
  if (f.pairs.empty()) throw std::invalid_argument("a name needs at least one pair");
  std::set<std::string> in_f;
  for (const auto& [x, y] : f.pairs) {
    in_f.insert(x.id);
    in_f.insert(y.id);
  }
  std::set<std::string> used;
  NameResult out{identity_ceer(1), {}, {}};
  std::vector<StagedCeer> zs;
  std::size_t next = 0;
  for (std::size_t k = 0; k < f.pairs.size(); ++k) {
    std::vector<NamedCeer> quad;
    for (int i = 0; i < 4; ++i) {
      quad.push_back(fresh(next++));
      const auto& id = quad.back().id;
      if (in_f.count(id) || !used.insert(id).second)
        throw std::invalid_argument("fresh ceer id " + id + " collides");
    }
    auto z = build_Z(f.pairs[k].first, f.pairs[k].second, quad, quotient_pair);
    for (auto s : z.summands) {
      s.pair = k;
      out.summands.push_back(std::move(s));
    }
    out.gadget.push_back({quad[0].id, quad[1].id, quad[2].id, quad[3].id});
    zs.push_back(std::move(z.ceer));
  }
  out.ceer = uniform_join_many(zs);
  return out;
}

namespace {

std::size_t vertex_named(FiniteGraph& g, const std::string& name) {
  if (auto v = g.find(name)) return *v;
  return g.add_vertex(name);
}

}  // namespace

FiniteGraph expected_label_graph(const PairSet& f, const std::vector<std::array<std::string, 4>>& gadget) {
  FiniteGraph g;
  for (std::size_t k = 0; k < f.pairs.size(); ++k) {
    std::array<std::string, 4> abcd;
    if (k < gadget.size()) {
      abcd = gadget[k];
    } else {
      const std::string tag = "#" + std::to_string(k);
      abcd = {"a" + tag, "b" + tag, "c" + tag, "d" + tag};
    }
    const std::array<std::string, 6> role{f.pairs[k].first.id, abcd[0], abcd[3],
                                          f.pairs[k].second.id, abcd[1], abcd[2]};
    std::array<std::size_t, 6> v{};
    for (int i = 0; i < 6; ++i) v[i] = vertex_named(g, role[i]);
    for (auto [i, j] : kEdgeRoles) g.add_edge(v[i], v[j]);
  }
  return g;
}

FiniteGraph decode_label_metadata(const std::vector<Summand>& summands) {
  FiniteGraph g;
  for (const auto& s : summands)
    if (s.kind == Summand::Kind::Vertex) vertex_named(g, s.u);
  for (const auto& s : summands) {
    if (s.kind != Summand::Kind::Edge) continue;
    auto u = g.find(s.u), v = g.find(s.v);
    if (!u || !v) throw std::invalid_argument("edge summand names a vertex without its own summand");
    g.add_edge(*u, *v);
  }
  return g;
}

nlohmann::json label_metadata(const PairSet& f, const NameResult& name) {
  nlohmann::json pairs = nlohmann::json::array();
  for (std::size_t k = 0; k < f.pairs.size(); ++k) {
    const auto& q = name.gadget.at(k);
    pairs.push_back({{"x", f.pairs[k].first.id},
                     {"y", f.pairs[k].second.id},
                     {"gadget", {{"a", q[0]}, {"b", q[1]}, {"c", q[2]}, {"d", q[3]}}}});
  }
  nlohmann::json summands = nlohmann::json::array();
  for (std::size_t i = 0; i < name.summands.size(); ++i) {
    const auto& s = name.summands[i];
    nlohmann::json e{{"index", i}, {"pair", s.pair}};
    if (s.kind == Summand::Kind::Vertex) {
      e["vertex"] = s.u;
    } else {
      e["edge"] = {s.u, s.v};
    }
    summands.push_back(std::move(e));
  }
  return {{"pairs", pairs}, {"summands", summands}};
}

}  // namespace ceerlab::names
