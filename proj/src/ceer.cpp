#include "ceerlab/ceer.hpp"

#include <algorithm>
#include <limits>
#include <numeric>
#include <sstream>
#include <stdexcept>
#include <unordered_map>

namespace ceerlab {

namespace {

std::vector<std::size_t> canonical(const std::vector<std::size_t>& raw, std::size_t* count) {
  std::unordered_map<std::size_t, std::size_t> seen;
  std::vector<std::size_t> out(raw.size());
  for (std::size_t i = 0; i < raw.size(); ++i) {
    auto [it, fresh] = seen.try_emplace(raw[i], seen.size());
    out[i] = it->second;
  }
  if (count) *count = seen.size();
  return out;
}

// Small-label variant for the hot paths (labels are already < bound).
std::vector<std::size_t> canonical_small(const std::vector<std::size_t>& raw, std::size_t bound,
                                         std::size_t* count) {
  constexpr std::size_t none = std::numeric_limits<std::size_t>::max();
  std::vector<std::size_t> map(bound, none);
  std::vector<std::size_t> out(raw.size());
  std::size_t next = 0;
  for (std::size_t i = 0; i < raw.size(); ++i) {
    auto& m = map[raw[i]];
    if (m == none) m = next++;
    out[i] = m;
  }
  if (count) *count = next;
  return out;
}

}  // namespace

// ---- FiniteCeer ---------------------------------------------------------

FiniteCeer FiniteCeer::from_labels(const std::vector<std::size_t>& labels) {
  if (labels.empty()) throw std::invalid_argument("finite ceer needs a nonempty universe");
  FiniteCeer c;
  c.labels_ = canonical(labels, &c.classes_);
  return c;
}

FiniteCeer FiniteCeer::from_classes(const std::vector<std::vector<Nat>>& classes) {
  Nat n = 0;
  for (const auto& cl : classes) {
    if (cl.empty()) throw std::invalid_argument("empty class");
    n += cl.size();
  }
  if (n == 0) throw std::invalid_argument("finite ceer needs a nonempty universe");
  constexpr std::size_t none = std::numeric_limits<std::size_t>::max();
  std::vector<std::size_t> labels(n, none);
  for (std::size_t k = 0; k < classes.size(); ++k) {
    for (Nat x : classes[k]) {
      if (x >= n || labels[x] != none) throw std::invalid_argument("classes do not partition 0..n-1");
      labels[x] = k;
    }
  }
  return from_labels(labels);
}

std::vector<Nat> FiniteCeer::representatives() const {
  std::vector<Nat> rep(classes_, 0);
  std::vector<bool> done(classes_, false);
  for (std::size_t x = 0; x < labels_.size(); ++x) {
    if (!done[labels_[x]]) {
      done[labels_[x]] = true;
      rep[labels_[x]] = x;
    }
  }
  return rep;
}

std::vector<std::vector<Nat>> FiniteCeer::window(Nat u) const {
  std::vector<std::vector<Nat>> out;
  std::vector<std::size_t> slot(classes_, std::numeric_limits<std::size_t>::max());
  for (Nat x = 0; x < u; ++x) {
    auto& k = slot[label(x)];
    if (k == std::numeric_limits<std::size_t>::max()) {
      k = out.size();
      out.emplace_back();
    }
    out[k].push_back(x);
  }
  return out;
}

StagedCeer FiniteCeer::to_staged(Nat u) const {
  if (u == 0) throw std::invalid_argument("universe bound must be positive");
  PairBatch pairs;
  std::vector<Nat> first(classes_, std::numeric_limits<Nat>::max());
  for (Nat x = 0; x < u; ++x) {
    auto& f = first[label(x)];
    if (f == std::numeric_limits<Nat>::max()) f = x;
    else pairs.emplace_back(f, x);
  }
  auto self = std::make_shared<const FiniteCeer>(*this);
  return StagedCeer(
      u, [pairs](Stage s) { return s == 0 ? pairs : PairBatch{}; },
      [self](Nat x, Nat y, Stage) { return !self->equivalent(x, y); });
}

// ---- StagedCeer ---------------------------------------------------------

struct StagedCeer::Cache {
  UnionFind uf;
  Stage next = 0;
  std::vector<PairBatch> batches;
  std::vector<PairBatch> merges;
  Stage replay_stage = std::numeric_limits<Stage>::max();
  UnionFind replay;
};

StagedCeer::StagedCeer(Nat universe_bound, PairStream stream, Separator separator)
    : universe_(universe_bound),
      stream_(std::move(stream)),
      separator_(std::move(separator)),
      cache_(std::make_unique<Cache>()) {
  if (universe_ == 0) throw std::invalid_argument("universe bound must be positive");
  cache_->uf = UnionFind(universe_);
}

StagedCeer::StagedCeer(const StagedCeer& o)
    : universe_(o.universe_),
      stream_(o.stream_),
      separator_(o.separator_),
      cache_(std::make_unique<Cache>(*o.cache_)) {}

StagedCeer& StagedCeer::operator=(const StagedCeer& o) {
  if (this != &o) {
    universe_ = o.universe_;
    stream_ = o.stream_;
    separator_ = o.separator_;
    cache_ = std::make_unique<Cache>(*o.cache_);
  }
  return *this;
}

StagedCeer::StagedCeer(StagedCeer&&) noexcept = default;
StagedCeer& StagedCeer::operator=(StagedCeer&&) noexcept = default;
StagedCeer::~StagedCeer() = default;

void StagedCeer::advance(Stage s) const {
  auto& c = *cache_;
  while (c.next <= s) {
    PairBatch raw = stream_ ? stream_(c.next) : PairBatch{};
    PairBatch kept, merged;
    kept.reserve(raw.size());
    for (const auto& [x, y] : raw) {
      if (x >= universe_ || y >= universe_) continue;
      kept.emplace_back(x, y);
      if (c.uf.unite(x, y)) merged.emplace_back(x, y);
    }
    c.batches.push_back(std::move(kept));
    c.merges.push_back(std::move(merged));
    ++c.next;
  }
}

UnionFind& StagedCeer::state_at(Stage s) const {
  advance(s);
  auto& c = *cache_;
  if (s + 1 == c.next) return c.uf;
  if (c.replay_stage != s) {
    c.replay = UnionFind(universe_);
    for (Stage t = 0; t <= s; ++t)
      for (const auto& [x, y] : c.merges[t]) c.replay.unite(x, y);
    c.replay_stage = s;
  }
  return c.replay;
}

const PairBatch& StagedCeer::batch(Stage s) const {
  advance(s);
  return cache_->batches[s];
}

const PairBatch& StagedCeer::frontier(Stage s) const {
  advance(s);
  return cache_->merges[s];
}

std::vector<std::size_t> StagedCeer::snapshot(Stage s) const {
  auto& uf = state_at(s);
  std::vector<std::size_t> roots(universe_);
  for (Nat x = 0; x < universe_; ++x) roots[x] = uf.find(x);
  return canonical_small(roots, universe_, nullptr);
}

std::vector<std::vector<Nat>> StagedCeer::classes(Stage s) const {
  auto labels = snapshot(s);
  std::vector<std::vector<Nat>> out;
  for (Nat x = 0; x < universe_; ++x) {
    if (labels[x] == out.size()) out.emplace_back();
    out[labels[x]].push_back(x);
  }
  return out;
}

std::size_t StagedCeer::class_count(Stage s) const {
  auto& uf = state_at(s);
  std::size_t n = 0;
  for (Nat x = 0; x < universe_; ++x)
    if (uf.find(x) == x) ++n;
  return n;
}

bool StagedCeer::equivalent(Nat x, Nat y, Stage s) const {
  if (x == y) return true;
  if (x >= universe_ || y >= universe_) return false;
  return state_at(s).same(x, y);
}

bool StagedCeer::certified_separate(Nat x, Nat y, Stage s) const {
  if (x == y) return false;
  return separator_ && separator_(x, y, s);
}

// ---- Ceer variant helpers -----------------------------------------------

bool equivalent(const Ceer& c, Nat x, Nat y, Stage s) {
  if (auto* f = std::get_if<FiniteCeer>(&c)) return f->equivalent(x, y);
  return std::get<StagedCeer>(c).equivalent(x, y, s);
}

bool certified_separate(const Ceer& c, Nat x, Nat y, Stage s) {
  if (auto* f = std::get_if<FiniteCeer>(&c)) return !f->equivalent(x, y);
  return std::get<StagedCeer>(c).certified_separate(x, y, s);
}

std::optional<Nat> universe_of(const Ceer& c) {
  if (std::holds_alternative<FiniteCeer>(c)) return std::nullopt;
  return std::get<StagedCeer>(c).universe_bound();
}

StagedCeer as_staged(const Ceer& c, Nat universe_for_finite) {
  if (auto* f = std::get_if<FiniteCeer>(&c)) return f->to_staged(universe_for_finite);
  return std::get<StagedCeer>(c);
}

// ---- CeSet --------------------------------------------------------------

CeSet CeSet::scripted(std::vector<std::pair<Nat, Stage>> events) {
  std::sort(events.begin(), events.end());
  CeSet w;
  for (const auto& ev : events) {
    if (!w.events_.empty() && w.events_.back().first == ev.first) continue;  // keep earliest
    w.events_.push_back(ev);
    w.settled_ = std::max(w.settled_, ev.second);
  }
  return w;
}

CeSet CeSet::decidable(std::function<bool(Nat)> pred, std::string) {
  CeSet w;
  w.pred_ = std::move(pred);
  return w;
}

std::optional<Stage> CeSet::enumerated_at(Nat x) const {
  if (pred_) return pred_(x) ? std::optional<Stage>(0) : std::nullopt;
  auto it = std::lower_bound(events_.begin(), events_.end(), std::pair<Nat, Stage>(x, 0));
  if (it == events_.end() || it->first != x) return std::nullopt;
  return it->second;
}

std::vector<Nat> CeSet::elements(Stage s, Nat bound) const {
  std::vector<Nat> out;
  if (pred_) {
    for (Nat x = 0; x < bound; ++x)
      if (pred_(x)) out.push_back(x);
    return out;
  }
  for (const auto& [x, t] : events_)
    if (t <= s && x < bound) out.push_back(x);
  return out;
}

std::optional<Nat> CeSet::max_element() const {
  if (pred_ || events_.empty()) return std::nullopt;
  return events_.back().first;
}

// ---- constructors -------------------------------------------------------

FiniteCeer id_n(Nat n) {
  if (n == 0) throw std::invalid_argument("Id_n requires n >= 1");
  std::vector<std::size_t> labels(n);
  std::iota(labels.begin(), labels.end(), std::size_t{0});
  return FiniteCeer::from_labels(labels);
}

StagedCeer identity_ceer(Nat u) {
  return StagedCeer(u, nullptr, [](Nat x, Nat y, Stage) { return x != y; });
}

StagedCeer recorded_ceer(Nat u, std::vector<PairBatch> stages, bool complete) {
  auto data = std::make_shared<const std::vector<PairBatch>>(std::move(stages));
  PairStream stream = [data](Stage s) { return s < data->size() ? (*data)[s] : PairBatch{}; };
  if (!complete) return StagedCeer(u, stream);
  auto final_state = std::make_shared<StagedCeer>(u, stream);
  const Stage last = data->empty() ? 0 : data->size() - 1;
  return StagedCeer(u, stream, [final_state, last, u](Nat x, Nat y, Stage) {
    if (x >= u || y >= u) return false;
    return !final_state->equivalent(x, y, last);
  });
}

// ---- algebra ------------------------------------------------------------

FiniteCeer uniform_join(const FiniteCeer& r, const FiniteCeer& s) {
  const std::size_t p = 2 * std::lcm(r.period(), s.period());
  std::vector<std::size_t> labels(p);
  for (std::size_t x = 0; x < p; ++x)
    labels[x] = (x % 2 == 0) ? r.label(x / 2) : r.num_classes() + s.label(x / 2);
  return FiniteCeer::from_labels(labels);
}

StagedCeer uniform_join(const StagedCeer& r, const StagedCeer& s) {
  auto R = std::make_shared<StagedCeer>(r);
  auto S = std::make_shared<StagedCeer>(s);
  const Nat u = std::min(2 * r.universe_bound(), 2 * s.universe_bound() + 1);
  PairStream stream = [R, S](Stage t) {
    PairBatch out;
    for (const auto& [x, y] : R->batch(t)) out.emplace_back(2 * x, 2 * y);
    for (const auto& [x, y] : S->batch(t)) out.emplace_back(2 * x + 1, 2 * y + 1);
    return out;
  };
  auto sep = [R, S](Nat x, Nat y, Stage t) {
    if ((x ^ y) & 1) return true;  // never across parities
    if (x % 2 == 0) return R->certified_separate(x / 2, y / 2, t);
    return S->certified_separate(x / 2, y / 2, t);
  };
  return StagedCeer(u, stream, sep);
}

Ceer uniform_join(const Ceer& r, const Ceer& s) {
  const auto* fr = std::get_if<FiniteCeer>(&r);
  const auto* fs = std::get_if<FiniteCeer>(&s);
  if (fr && fs) return uniform_join(*fr, *fs);
  const Nat u = fr ? std::get<StagedCeer>(s).universe_bound() : std::get<StagedCeer>(r).universe_bound();
  return uniform_join(as_staged(r, u), as_staged(s, u));
}

FiniteCeer uniform_join_many(const std::vector<FiniteCeer>& parts) {
  if (parts.empty()) throw std::invalid_argument("uniform join of an empty list");
  const std::size_t m = parts.size();
  std::size_t l = 1;
  std::vector<std::size_t> offset(m, 0);
  for (std::size_t i = 0; i < m; ++i) {
    l = std::lcm(l, parts[i].period());
    if (i + 1 < m) offset[i + 1] = offset[i] + parts[i].num_classes();
  }
  std::vector<std::size_t> labels(m * l);
  for (std::size_t x = 0; x < labels.size(); ++x) labels[x] = offset[x % m] + parts[x % m].label(x / m);
  return FiniteCeer::from_labels(labels);
}

StagedCeer uniform_join_many(const std::vector<StagedCeer>& parts) {
  if (parts.empty()) throw std::invalid_argument("uniform join of an empty list");
  const Nat m = parts.size();
  auto ps = std::make_shared<std::vector<StagedCeer>>(parts);
  Nat u = std::numeric_limits<Nat>::max();
  for (Nat i = 0; i < m; ++i) u = std::min(u, parts[i].universe_bound() * m + i);
  PairStream stream = [ps, m](Stage t) {
    PairBatch out;
    for (Nat i = 0; i < m; ++i)
      for (const auto& [x, y] : (*ps)[i].batch(t))
        out.emplace_back(join_many_encode(i, x, m), join_many_encode(i, y, m));
    return out;
  };
  auto sep = [ps, m](Nat x, Nat y, Stage t) {
    if (x % m != y % m) return true;
    return (*ps)[x % m].certified_separate(x / m, y / m, t);
  };
  return StagedCeer(u, stream, sep);
}

RestrictionResult restriction(const StagedCeer& e, const CeSet& w, const ReductionFn& h,
                              Nat out_universe) {
  if (out_universe == 0) throw std::invalid_argument("universe bound must be positive");
  auto E = std::make_shared<StagedCeer>(e);
  auto hx = std::make_shared<std::vector<Nat>>(out_universe);
  const Stage settled = w.settled_stage();
  std::vector<bool> hit(e.universe_bound(), false);
  for (Nat x = 0; x < out_universe; ++x) {
    const Nat v = h(x);
    if (v >= e.universe_bound())
      throw std::domain_error("h(" + std::to_string(x) + ") = " + std::to_string(v) +
                              " lies outside the materialized universe");
    if (!w.member(v, settled))
      throw std::domain_error("h(" + std::to_string(x) + ") = " + std::to_string(v) + " is not in W");
    (*hx)[x] = v;
    hit[v] = true;
  }
  RestrictionResult res{StagedCeer(1, nullptr), {}};
  std::size_t missed = 0;
  Nat first_missed = 0;
  for (Nat v : w.elements(settled, e.universe_bound())) {
    if (!hit[v] && missed++ == 0) first_missed = v;
  }
  if (missed)
    res.warnings.push_back("h misses " + std::to_string(missed) +
                           " materialized element(s) of W, first " + std::to_string(first_missed));

  PairStream stream = [E, hx](Stage s) {
    PairBatch out;
    if (s > 0 && E->frontier(s).empty()) return out;
    std::unordered_map<std::size_t, Nat> first;
    auto labels = E->snapshot(s);
    for (Nat x = 0; x < hx->size(); ++x) {
      auto [it, fresh] = first.try_emplace(labels[(*hx)[x]], x);
      if (!fresh) out.emplace_back(it->second, x);
    }
    return out;
  };
  auto sep = [E, hx](Nat x, Nat y, Stage s) {
    if (x >= hx->size() || y >= hx->size()) return false;
    return E->certified_separate((*hx)[x], (*hx)[y], s);
  };
  res.ceer = StagedCeer(out_universe, stream, sep);
  return res;
}

FiniteCeer restriction(const FiniteCeer& e, const std::vector<bool>& w_residues) {
  if (w_residues.empty()) throw std::invalid_argument("empty residue pattern");
  const std::size_t p = std::lcm(e.period(), w_residues.size());
  std::vector<std::size_t> labels;
  for (std::size_t x = 0; x < p; ++x)
    if (w_residues[x % w_residues.size()]) labels.push_back(e.label(x));
  if (labels.empty()) throw std::invalid_argument("restriction to an empty set");
  return FiniteCeer::from_labels(labels);
}

StagedCeer quotient(const StagedCeer& e, PairStream w) {
  auto E = std::make_shared<StagedCeer>(e);
  PairStream stream = [E, w](Stage s) {
    PairBatch out = E->batch(s);
    if (w) {
      auto extra = w(s);
      out.insert(out.end(), extra.begin(), extra.end());
    }
    return out;
  };
  return StagedCeer(e.universe_bound(), stream);
}

FiniteCeer quotient(const FiniteCeer& e, const PairBatch& w) {
  UnionFind uf(e.num_classes());
  for (const auto& [x, y] : w) uf.unite(e.label(x), e.label(y));
  std::vector<std::size_t> labels(e.period());
  for (std::size_t x = 0; x < labels.size(); ++x) labels[x] = uf.find(e.labels()[x]);
  return FiniteCeer::from_labels(labels);
}

PairStream column_code(Nat n, const StagedCeer& e) {
  auto E = std::make_shared<StagedCeer>(e);
  return [E, n](Stage s) {
    PairBatch out;
    for (const auto& [x, y] : E->batch(s)) out.emplace_back(pair(n, x), pair(n, y));
    return out;
  };
}

StagedCeer iota(const StagedCeer& x) { return uniform_join(x, identity_ceer(x.universe_bound())); }

// ---- reductions ---------------------------------------------------------

ReductionVerdict check_reduction_window(const Ceer& r, const Ceer& s, const ReductionFn& f,
                                        Nat bound, Stage stage) {
  ReductionVerdict v;
  v.bound = bound;
  v.stage = stage;
  std::vector<Nat> fx(bound);
  for (Nat x = 0; x < bound; ++x) fx[x] = f(x);
  for (Nat x = 0; x < bound; ++x) {
    for (Nat y = x + 1; y < bound; ++y) {
      const bool in_r = equivalent(r, x, y, stage);
      const bool in_s = equivalent(s, fx[x], fx[y], stage);
      if (in_r == in_s) continue;
      Obligation ob{x, y, in_r ? Obligation::Direction::Forward : Obligation::Direction::Backward};
      const bool refuted = in_r ? certified_separate(s, fx[x], fx[y], stage)
                                : certified_separate(r, x, y, stage);
      if (refuted) {
        v.kind = ReductionVerdict::Kind::HardViolation;
        v.obligations = {ob};
        return v;
      }
      v.obligations.push_back(ob);
    }
  }
  return v;
}

BruteForceResult brute_force_reduces(const FiniteCeer& r, const FiniteCeer& s, bool want_witness) {
  BruteForceResult res;
  const std::size_t kr = r.num_classes(), ks = s.num_classes();
  std::vector<std::size_t> assign(kr, 0);
  std::vector<bool> used(ks, false);
  // Depth-first search over injective class maps; a branch dies as soon as
  // the unassigned R-classes outnumber the unused S-classes.
  std::function<bool(std::size_t, std::size_t)> go = [&](std::size_t c, std::size_t free) -> bool {
    if (c == kr) return true;
    if (kr - c > free) return false;
    for (std::size_t d = 0; d < ks; ++d) {
      if (used[d]) continue;
      used[d] = true;
      assign[c] = d;
      if (go(c + 1, free - 1)) return true;
      used[d] = false;
    }
    return false;
  };
  res.reduces = go(0, ks);
  if (res.reduces && want_witness) {
    const auto rep = s.representatives();
    std::vector<Nat> table(r.period());
    for (std::size_t x = 0; x < table.size(); ++x) table[x] = rep[assign[r.labels()[x]]];
    res.class_map = assign;
    res.witness = ReductionFn::from_table(std::move(table), true);
  }
  return res;
}

std::string describe(const FiniteCeer& c, Nat window_size) {
  std::ostringstream os;
  bool first_class = true;
  for (const auto& cl : c.window(window_size)) {
    if (!first_class) os << ' ';
    first_class = false;
    os << '{';
    for (std::size_t i = 0; i < cl.size(); ++i) os << (i ? "," : "") << cl[i];
    os << '}';
  }
  return os.str();
}

}  // namespace ceerlab
