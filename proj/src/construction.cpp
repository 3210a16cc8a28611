#include "ceerlab/construction.hpp"

#include <algorithm>
#include <fstream>
#include <stdexcept>

#include "ceerlab/json_io.hpp"

namespace ceerlab::construction {

namespace {

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

Nat parse_nat(const std::string& s, const std::string& what) {
  try {
    std::size_t used = 0;
    auto v = std::stoull(s, &used);
    if (used != s.size()) throw std::invalid_argument(what);
    return v;
  } catch (const std::exception&) {
    throw std::invalid_argument("bad number in family spec: " + what);
  }
}

}  // namespace

GraphInput GraphInput::from_finite(const FiniteGraph& g) {
  auto shared = std::make_shared<FiniteGraph>(g);
  GraphInput in;
  in.vertex_count = g.size();
  in.edge = [shared](Nat i, Nat j, Stage) { return shared->has_edge(i, j); };
  return in;
}

StagedCeer GeneratorFamily::member(Nat i, Nat bound) const {
  auto f = pairs;
  return StagedCeer(bound, [f, i, bound](Stage s) { return f(i, s, bound); });
}

GeneratorFamily make_family(const std::string& spec) {
  GeneratorFamily fam;
  fam.spec = spec;
  const auto colon = spec.find(':');
  const std::string head = spec.substr(0, colon);
  const std::string arg = colon == std::string::npos ? "" : spec.substr(colon + 1);

  if (head == "id") {
    fam.pairs = [](Nat, Stage, Nat) { return PairBatch{}; };
  } else if (head == "idn") {
    const Nat k = parse_nat(arg, spec);
    if (k == 0) throw std::invalid_argument("idn:K needs K >= 1");
    fam.pairs = [k](Nat, Stage s, Nat bound) {
      PairBatch out;
      if (s == 0)
        for (Nat x = k; x < bound; ++x) out.emplace_back(x - k, x);
      return out;
    };
  } else if (head == "mod") {
    // R_i is Id_{i+1}; element t joins its residue class at stage t.
    fam.pairs = [](Nat i, Stage s, Nat bound) {
      PairBatch out;
      if (s < bound && s >= i + 1) out.emplace_back(s - (i + 1), s);
      return out;
    };
  } else if (head == "random") {
    const Nat seed = parse_nat(arg, spec);
    fam.pairs = [seed](Nat i, Stage s, Nat bound) {
      PairBatch out;
      const auto h = splitmix64(seed ^ splitmix64(i * 1000003ULL + s));
      if (h % 4 != 0) return out;
      const Nat a = (h >> 8) % 24, b = (h >> 24) % 24;
      if (a != b && a < bound && b < bound) out.emplace_back(a, b);
      return out;
    };
  } else if (head == "file") {
    std::ifstream in(arg);
    if (!in) throw std::invalid_argument("cannot open family file " + arg);
    nlohmann::json j;
    in >> j;
    if (!j.contains("members") || !j["members"].is_array() || j["members"].empty())
      throw std::invalid_argument("family file needs a nonempty \"members\" array");
    auto members = std::make_shared<std::vector<std::vector<PairBatch>>>();
    for (const auto& m : j["members"]) members->push_back(io::ceer_stage_batches(m));
    if (j.contains("claimed_properties")) fam.claimed_properties = j["claimed_properties"].get<std::string>();
    fam.pairs = [members](Nat i, Stage s, Nat bound) {
      const auto& stages = (*members)[i % members->size()];
      PairBatch out;
      if (s < stages.size())
        for (auto [x, y] : stages[s])
          if (x < bound && y < bound) out.emplace_back(x, y);
      return out;
    };
  } else {
    throw std::invalid_argument("unknown family spec '" + spec + "'");
  }
  return fam;
}

std::strong_ordering priority_order(const Requirement& a, const Requirement& b) {
  if (a.index != b.index) return a.index <=> b.index;
  return static_cast<int>(a.kind) <=> static_cast<int>(b.kind);
}

bool edge_binding(const GraphInput& g, Nat i, Stage s) {
  const auto [a, b] = unpair(i);
  if (a == b) return false;
  if (pair(b, a) < i) return false;
  if (g.vertex_count && (a >= *g.vertex_count || b >= *g.vertex_count)) return false;
  return g.edge(a, b, s);
}

Nat finite_index_limit(Nat n) {
  if (n == 0) throw std::invalid_argument("graph needs at least one vertex");
  if (n == 1) return 0;
  return std::max(n - 1, pair(n - 1, n - 2));
}

std::optional<Edge> requires_attention(Nat j, const ConstructionState& state, const CeSet& w,
                                       Stage s_plus_1) {
  const Stage s = s_plus_1 - 1;
  if (j > s) return std::nullopt;
  auto eps = state.epsilon.find(j);
  if (eps == state.epsilon.end()) return std::nullopt;
  if (state.satisfied.count(j)) return std::nullopt;
  std::vector<Nat> in_window;
  // Scripted sets are finite; for decidable sets only the columns below r
  // can matter, but their elements are unbounded, so those are not supported.
  if (!w.is_scripted()) throw std::invalid_argument("W sets for the construction must be scripted");
  for (const auto& [x, t] : w.events()) {
    if (t > s_plus_1) continue;
    const Nat col = column_of(x);
    if (col >= eps->second + 1 && col < state.r) in_window.push_back(x);
  }
  if (in_window.size() < 2) return std::nullopt;
  std::sort(in_window.begin(), in_window.end());
  return Edge{in_window[0], in_window[1]};
}

// ---- engine -------------------------------------------------------------

Engine::Engine(GraphInput g, GeneratorFamily family, std::vector<CeSet> ws, Config cfg)
    : graph_(std::move(g)), family_(std::move(family)), ws_(std::move(ws)), cfg_(cfg) {
  if (cfg_.quotient_pair.first % 2 != 0 || cfg_.quotient_pair.second % 2 != 1)
    throw std::invalid_argument("quotient pair must be (even, odd)");
  universe_ = std::max<Nat>(cfg_.universe, 1);
  for (const auto& w : ws_) {
    if (!w.is_scripted()) throw std::invalid_argument("W sets for the construction must be scripted");
    if (auto m = w.max_element()) universe_ = std::max(universe_, *m + 1);
  }
  uf_ = UnionFind(universe_);
  stage_zero();
}

Nat Engine::column_bound(Nat n) {
  auto it = bound_cache_.find(n);
  if (it != bound_cache_.end()) return it->second;
  Nat x = 0;
  while (pair(n, x) < universe_) ++x;
  bound_cache_[n] = x;
  return x;
}

void Engine::emit(Nat x, Nat y) {
  current_.emplace_back(x, y);
  uf_.unite(x, y);
}

void Engine::feed(const Active& a, Stage t) {
  const Nat n = a.column, bound = column_bound(n);
  if (bound == 0) return;
  if (a.content.kind == Column::Kind::Coding) {
    for (auto [x, y] : family_.pairs(a.content.index, t, bound)) emit(pair(n, x), pair(n, y));
  } else {
    for (auto [x, y] : family_.pairs(a.content.a, t, (bound + 1) / 2)) emit(pair(n, 2 * x), pair(n, 2 * y));
    for (auto [x, y] : family_.pairs(a.content.b, t, bound / 2)) emit(pair(n, 2 * x + 1), pair(n, 2 * y + 1));
  }
}

void Engine::open_column(const Column& col, Stage upto) {
  Active a{col.first, col};
  for (Stage t = 0; t <= upto; ++t) feed(a, t);
  if (col.kind == Column::Kind::QuotientEdge) {
    const auto [p, q] = cfg_.quotient_pair;
    const Nat bound = column_bound(col.first);
    if (p < bound && q < bound) emit(pair(col.first, p), pair(col.first, q));
  }
  active_.push_back(a);
  state_.layout.push_back(col);
}

void Engine::define(Nat i, Nat column, Stage s) {
  state_.gamma[i] = column;
  const bool binding = edge_binding(graph_, i, s);
  const Nat eps = binding ? column + 1 : column;
  state_.epsilon[i] = eps;
  ++state_.gamma_changes[i];
  state_.last_change[i] = s;

  Column code;
  code.kind = Column::Kind::Coding;
  code.first = code.last = column;
  code.index = i;
  open_column(code, s);
  if (binding) {
    Column edge;
    edge.kind = Column::Kind::QuotientEdge;
    edge.first = edge.last = eps;
    edge.index = i;
    const auto [a, b] = unpair(i);
    edge.a = a;
    edge.b = b;
    open_column(edge, s);
  }
  state_.r = eps + 1;
}

void Engine::collapse_block(Nat first, Nat last) {
  std::optional<Nat> rep;
  for (Nat n = first; n <= last; ++n) {
    const Nat bound = column_bound(n);
    for (Nat x = 0; x < bound; ++x) {
      const Nat z = pair(n, x);
      if (!rep) rep = z;
      else emit(*rep, z);
    }
  }
}

void Engine::update_satisfaction(Stage s) {
  if (cfg_.finite_mode) return;
  for (Nat j = 0; j < ws_.size(); ++j) {
    if (state_.satisfied.count(j)) continue;
    std::map<std::size_t, int> seen;
    for (Nat x : ws_[j].elements(s, universe_)) {
      if (++seen[uf_.find(x)] == 2) {
        state_.satisfied.insert(j);
        break;
      }
    }
  }
}

void Engine::check_layout() const {
  std::vector<Column> cols = state_.layout;
  std::sort(cols.begin(), cols.end(), [](const Column& a, const Column& b) { return a.first < b.first; });
  Nat next = 0;
  for (const auto& c : cols) {
    if (c.first != next || c.last < c.first)
      throw std::logic_error("layout does not tile [0, r) at column " + std::to_string(next));
    next = c.last + 1;
  }
  if (next != state_.r) throw std::logic_error("layout ends before r");
  for (const auto& [i, g] : state_.gamma)
    if (g >= state_.r || state_.epsilon.at(i) >= state_.r) throw std::logic_error("parameter not below r");
}

void Engine::record(StageRecord rec) {
  rec.stage = state_.stage;
  rec.r = state_.r;
  rec.gamma = state_.gamma;
  rec.epsilon = state_.epsilon;
  rec.satisfied = state_.satisfied;
  trace_.stages.push_back(std::move(rec));
  trace_.pairs.push_back(std::move(current_));
  current_.clear();
}

void Engine::stage_zero() {
  trace_.universe = universe_;
  trace_.finite_mode = cfg_.finite_mode;
  state_.stage = 0;
  define(0, 0, 0);
  update_satisfaction(0);
  check_layout();
  StageRecord rec;
  rec.action = StageRecord::Action::Initial;
  rec.defined = 0;
  record(rec);
}

void Engine::step() {
  const Stage s = state_.stage, s1 = s + 1;

  std::optional<Nat> acting;
  std::optional<Edge> witnesses;
  if (!cfg_.finite_mode) {
    for (Nat j = 0; j < ws_.size() && j <= s; ++j) {
      if (auto w = requires_attention(j, state_, ws_[j], s1)) {
        acting = j;
        witnesses = w;
        break;
      }
    }
  }

  for (const auto& a : active_) feed(a, s1);
  state_.stage = s1;

  StageRecord rec;
  if (acting) {
    const Nat j = *acting;
    const Nat first = state_.epsilon.at(j) + 1, last = state_.r - 1;
    collapse_block(first, last);
    for (auto it = state_.gamma.upper_bound(j + 1); it != state_.gamma.end();) {
      state_.last_change[it->first] = s1;
      state_.epsilon.erase(it->first);
      it = state_.gamma.erase(it);
    }
    std::erase_if(state_.layout, [first](const Column& c) { return c.first >= first; });
    std::erase_if(active_, [first](const Active& a) { return a.column >= first; });
    Column block;
    block.kind = Column::Kind::Block;
    block.first = first;
    block.last = last;
    state_.layout.push_back(block);
    define(j + 1, last + 1, s1);
    state_.satisfied.insert(j);

    rec.action = StageRecord::Action::DarkActed;
    rec.dark = j;
    rec.defined = j + 1;
    rec.witnesses = witnesses;
    rec.block = std::make_pair(first, last);
  } else {
    Nat i = 0;
    while (state_.defined(i)) ++i;
    const bool done = cfg_.finite_mode && graph_.vertex_count && i > finite_index_limit(*graph_.vertex_count);
    if (done) {
      rec.action = StageRecord::Action::Idle;
    } else {
      define(i, state_.r, s1);
      rec.action = StageRecord::Action::CodeDefined;
      rec.defined = i;
    }
  }

  update_satisfaction(s1);
  check_layout();
  record(rec);
}

bool Engine::equivalent(Nat x, Nat y) {
  if (x >= universe_ || y >= universe_) return x == y;
  return uf_.same(x, y);
}

ConstructionState stage_zero(const GraphInput& g, const GeneratorFamily& family, const Config& cfg) {
  return Engine(g, family, {}, cfg).state();
}

RunResult run(const GraphInput& g, const GeneratorFamily& family, const std::vector<CeSet>& ws,
              Stage stages, const Config& cfg) {
  if (stages == 0) throw std::invalid_argument("run needs at least one stage");
  Engine e(g, family, ws, cfg);
  for (Stage s = 1; s < stages; ++s) e.step();
  return RunResult{recorded_ceer(e.universe(), e.trace().pairs), e.state(), e.trace()};
}

FiniteGraph decode_layout_graph(const ConstructionState& final_state, Nat n, Stage stages_run) {
  const Nat limit = finite_index_limit(n);
  const Stage cutoff = stages_run - stages_run / 4;
  for (Nat i = 0; i <= limit; ++i) {
    if (!final_state.defined(i))
      throw std::runtime_error("index " + std::to_string(i) + " not yet defined; run more stages");
    auto lc = final_state.last_change.find(i);
    if (lc != final_state.last_change.end() && lc->second >= cutoff)
      throw std::runtime_error("index " + std::to_string(i) + " changed at stage " +
                               std::to_string(lc->second) + " in the final quarter; run more stages");
  }
  FiniteGraph g(n);
  std::vector<bool> coded(n, false);
  for (const auto& c : final_state.layout) {
    if (c.kind == Column::Kind::Coding && c.index < n) coded[c.index] = true;
    if (c.kind == Column::Kind::QuotientEdge && c.index <= limit && c.a < n && c.b < n) g.add_edge(c.a, c.b);
  }
  for (Nat v = 0; v < n; ++v)
    if (!coded[v]) throw std::runtime_error("vertex " + std::to_string(v) + " has no coding column");
  return g;
}

// ---- verification by replay --------------------------------------------

DarkReport verify_dark_satisfaction(const Trace& trace, const std::vector<CeSet>& ws, Nat bound) {
  DarkReport rep;
  const Nat m = std::min<Nat>(bound, ws.size());
  rep.outcomes.resize(m);
  for (Nat j = 0; j < m; ++j) rep.outcomes[j].j = j;
  if (trace.stages.empty()) return rep;

  auto C = recorded_ceer(trace.universe, trace.pairs);
  auto fail = [&](Stage t, const std::string& msg) {
    rep.violations.push_back("stage " + std::to_string(t) + ": " + msg);
  };
  // A pair of distinct W_j elements collapsed in C_t.
  auto passive = [&](Nat j, Stage t) {
    std::vector<Nat> el;
    for (const auto& [x, st] : ws[j].events())
      if (st <= t) el.push_back(x);
    for (std::size_t a = 0; a < el.size(); ++a)
      for (std::size_t b = a + 1; b < el.size(); ++b)
        if (C.equivalent(el[a], el[b], t)) return true;
    return false;
  };

  const bool dark_enabled = !trace.finite_mode;
  std::vector<Edge> acted_witnesses;
  for (Stage t = 0; t < trace.stages.size(); ++t) {
    const auto& cur = trace.stages[t];
    if (t > 0) {
      const auto& prev = trace.stages[t - 1];
      std::optional<Nat> expect;
      std::optional<Edge> expect_w;
      for (Nat j = 0; j < ws.size() && j <= t - 1 && !expect; ++j) {
        auto eps = prev.epsilon.find(j);
        if (eps == prev.epsilon.end() || prev.satisfied.count(j)) continue;
        std::vector<Nat> hits;
        for (const auto& [x, st] : ws[j].events()) {
          if (st > t) continue;
          const Nat col = proj0(x);
          if (col > eps->second && col < prev.r) hits.push_back(x);
        }
        if (hits.size() >= 2) {
          std::sort(hits.begin(), hits.end());
          expect = j;
          expect_w = Edge{hits[0], hits[1]};
        }
      }
      if (!dark_enabled) expect.reset();
      const bool acted = cur.action == StageRecord::Action::DarkActed;
      if (expect && !acted) fail(t, "Dark_" + std::to_string(*expect) + " required attention but nothing acted");
      if (!expect && acted) fail(t, "Dark_" + std::to_string(*cur.dark) + " acted without requiring attention");
      if (expect && acted) {
        if (*cur.dark != *expect)
          fail(t, "Dark_" + std::to_string(*cur.dark) + " acted but Dark_" + std::to_string(*expect) +
                      " has priority");
        if (cur.witnesses != expect_w) fail(t, "witness pair is not the least one");
      }
      if (acted && cur.witnesses) {
        if (!C.equivalent(cur.witnesses->first, cur.witnesses->second, t))
          fail(t, "witnesses not collapsed at the acting stage");
        acted_witnesses.push_back(*cur.witnesses);
        if (cur.dark && *cur.dark < m && rep.outcomes[*cur.dark].kind == DarkOutcome::Kind::WindowNeverHit) {
          auto& o = rep.outcomes[*cur.dark];
          o.kind = DarkOutcome::Kind::Acted;
          o.stage = t;
          o.witnesses = cur.witnesses;
        }
      }
      for (Nat j : prev.satisfied)
        if (!cur.satisfied.count(j)) fail(t, "Dark_" + std::to_string(j) + " became unsatisfied");
    }
    if (dark_enabled) {
      for (Nat j = 0; j < ws.size(); ++j) {
        const bool p = passive(j, t);
        if (p != (cur.satisfied.count(j) > 0))
          fail(t, "satisfied set disagrees with C on Dark_" + std::to_string(j));
        if (p && j < m && rep.outcomes[j].kind == DarkOutcome::Kind::WindowNeverHit) {
          rep.outcomes[j].kind = DarkOutcome::Kind::Passive;
          rep.outcomes[j].stage = t;
        }
      }
    }
  }
  const Stage last = trace.stages.size() - 1;
  for (auto [x, y] : acted_witnesses)
    if (!C.equivalent(x, y, last)) fail(last, "witnesses not collapsed in the final C");
  return rep;
}

std::string to_string(StageRecord::Action a) {
  switch (a) {
    case StageRecord::Action::Initial: return "initial";
    case StageRecord::Action::DarkActed: return "dark-acted";
    case StageRecord::Action::CodeDefined: return "code-defined";
    case StageRecord::Action::Idle: return "idle";
  }
  return "?";
}

std::string to_string(DarkOutcome::Kind k) {
  switch (k) {
    case DarkOutcome::Kind::Acted: return "acted";
    case DarkOutcome::Kind::Passive: return "passive";
    case DarkOutcome::Kind::WindowNeverHit: return "window-never-hit";
  }
  return "?";
}

}  // namespace ceerlab::construction
