#include "ceerlab/model_check.hpp"

#include <algorithm>
#include <cstdint>
#include <iterator>
#include <map>
#include <functional>
#include <stdexcept>
#include <unordered_map>

namespace ceerlab::logic {

// ---- structures -----------------------------------------------------------

Structure Structure::graph(const FiniteGraph& g) {
  Structure s;
  s.sig_ = Signature::Graph;
  s.size_ = g.size();
  s.graph_ = &g;
  return s;
}

Structure Structure::poset(const FinitePoset& p) {
  Structure s;
  s.sig_ = Signature::Poset;
  s.size_ = p.size();
  s.poset_ = &p;
  return s;
}

Structure Structure::arithmetic(std::size_t n_max) {
  Structure s;
  s.sig_ = Signature::Arith;
  s.size_ = n_max + 1;
  return s;
}

std::string Structure::element_name(std::size_t v) const {
  if (graph_) return graph_->name(v);
  if (poset_) return poset_->name(v);
  return std::to_string(v);
}

std::size_t Structure::element(const std::string& name) const {
  std::optional<std::size_t> v;
  if (graph_) v = graph_->find(name);
  else if (poset_) v = poset_->find(name);
  else {
    try {
      std::size_t used = 0;
      auto n = std::stoull(name, &used);
      if (used == name.size() && n < size_) v = n;
    } catch (const std::exception&) {
    }
  }
  if (!v) throw std::invalid_argument("no element named '" + name + "'");
  return *v;
}

bool Structure::holds(Node atom, const std::size_t* v) const {
  switch (atom) {
    case Node::True: return true;
    case Node::False: return false;
    case Node::Eq: return v[0] == v[1];
    case Node::Leq: return poset_->leq(v[0], v[1]);
    case Node::Edge: return graph_->has_edge(v[0], v[1]);
    case Node::Plus: return v[0] + v[1] == v[2];
    case Node::Times: return v[0] * v[1] == v[2];
    default: throw std::logic_error("holds() on a non-atom");
  }
}

bool Structure::candidates(Node atom, int slot, const std::size_t* v, std::vector<std::size_t>& out) const {
  out.clear();
  const std::size_t n = size_;
  switch (atom) {
    case Node::Eq:
      out.push_back(v[1 - slot]);
      return true;
    case Node::Leq:
      if (slot == 0) out = poset_->down(v[1]);
      else out = poset_->up(v[0]);
      return true;
    case Node::Edge:
      out = graph_->neighbours(v[1 - slot]);
      return true;
    case Node::Plus: {
      if (slot == 2) {
        if (v[0] + v[1] < n) out.push_back(v[0] + v[1]);
      } else {
        std::size_t other = v[1 - slot];
        if (v[2] >= other) out.push_back(v[2] - other);
      }
      return true;
    }
    case Node::Times: {
      if (slot == 2) {
        if (v[0] * v[1] < n) out.push_back(v[0] * v[1]);
        return true;
      }
      std::size_t other = v[1 - slot];
      if (other == 0) {
        if (v[2] != 0) return true;
        return false;  // every element works
      }
      if (v[2] % other == 0) out.push_back(v[2] / other);
      return true;
    }
    default:
      return false;
  }
}

// ---- compiled formulas ----------------------------------------------------

namespace {

constexpr std::size_t kMaxEnv = 64;
constexpr std::size_t kFilterThreshold = 16;

struct Link {
  std::uint32_t child;
  std::vector<std::uint16_t> map;  // child slot -> parent environment index
};

struct Guard {
  Node atom;
  std::vector<std::uint16_t> slots;  // atom argument -> quantifier environment index
  int bound_pos;                     // which argument is the bound variable
};

// A non-atomic conjunct (antecedent under forall) mentioning the bound
// variable: its extension over the bound variable, for fixed outer values,
// narrows the range once computed.
struct Filter {
  std::uint32_t node;
  std::vector<std::uint16_t> slots;  // node slot -> quantifier environment index
};

struct CNode {
  Node kind;
  std::uint16_t arity = 0;
  std::vector<std::uint16_t> atom_slots;
  std::vector<Link> kids;
  std::vector<Guard> guards;
  std::vector<Filter> filters;
  // Values passing every one-variable filter; other filters are only
  // evaluated on these.
  std::vector<std::size_t> base;
  bool base_ready = false;
  std::unordered_map<std::uint64_t, bool> memo_small;
  std::unordered_map<std::string, bool> memo_big;
};

struct Compiled {
  std::uint32_t id;
  std::vector<std::string> free;
};

}  // namespace

struct ModelChecker::Impl {
  Structure m;  // a small handle; callers may pass temporaries
  std::vector<CNode> nodes;
  std::unordered_map<std::string, std::uint32_t> intern;
  std::vector<std::string> root_free;
  std::uint32_t root = 0;
  CheckStats stats;
  bool small_keys = true;

  explicit Impl(const Structure& s) : m(s) { small_keys = s.size() < (1u << 16); }

  std::uint32_t add(CNode n, const std::string& key) {
    auto it = intern.find(key);
    if (it != intern.end()) return it->second;
    nodes.push_back(std::move(n));
    auto id = static_cast<std::uint32_t>(nodes.size() - 1);
    intern.emplace(key, id);
    return id;
  }

  static std::uint16_t slot_of(std::vector<std::string>& free, const std::string& v) {
    auto it = std::find(free.begin(), free.end(), v);
    if (it != free.end()) return static_cast<std::uint16_t>(it - free.begin());
    free.push_back(v);
    return static_cast<std::uint16_t>(free.size() - 1);
  }

  static void key_map(std::string& key, std::uint32_t id, const std::vector<std::uint16_t>& map) {
    key += std::to_string(id);
    key += '[';
    for (auto s : map) {
      key += std::to_string(s);
      key += ',';
    }
    key += ']';
  }

  // Compiled results depend only on the node, so shared subformulas of a
  // macro-expanded DAG are compiled once.
  std::unordered_map<const Formula*, Compiled> compiled;

  Compiled compile(const F& f) {
    auto it = compiled.find(f.get());
    if (it != compiled.end()) return it->second;
    Compiled c = compile_node(f);
    compiled.emplace(f.get(), c);
    return c;
  }

  Compiled compile_node(const F& f) {
    const Node k = f->node;
    if (is_atom(k)) {
      CNode n;
      n.kind = k;
      std::vector<std::string> free;
      std::string key = "a" + std::to_string(static_cast<int>(k)) + ":";
      for (const auto& a : f->args) {
        n.atom_slots.push_back(slot_of(free, a));
        key += std::to_string(n.atom_slots.back()) + ",";
      }
      n.arity = static_cast<std::uint16_t>(free.size());
      return {add(std::move(n), key), free};
    }
    if (k == Node::Forall || k == Node::Exists) {
      const std::string& v = f->args[0];
      Compiled body = compile(f->kids[0]);
      std::vector<std::string> free;
      for (const auto& x : body.free)
        if (x != v) free.push_back(x);
      if (free.size() + 1 > kMaxEnv) throw std::length_error("formula has too many free variables");
      CNode n;
      n.kind = k;
      n.arity = static_cast<std::uint16_t>(free.size());
      Link link{body.id, {}};
      for (const auto& x : body.free)
        link.map.push_back(x == v ? n.arity : slot_of(free, x));
      std::string key = k == Node::Forall ? "A:" : "E:";
      key_map(key, body.id, link.map);
      auto it = intern.find(key);
      if (it != intern.end()) return {it->second, free};
      n.kids.push_back(std::move(link));
      n.guards = collect_guards(n, k, n.filters);
      return {add(std::move(n), key), free};
    }
    std::vector<Compiled> kids;
    std::vector<std::string> free;
    for (const auto& c : f->kids) {
      kids.push_back(compile(c));
      for (const auto& x : kids.back().free) slot_of(free, x);
    }
    if (free.size() > kMaxEnv) throw std::length_error("formula has too many free variables");
    CNode n;
    n.kind = k;
    n.arity = static_cast<std::uint16_t>(free.size());
    std::string key = "c" + std::to_string(static_cast<int>(k)) + ":";
    for (const auto& c : kids) {
      Link link{c.id, {}};
      for (const auto& x : c.free) link.map.push_back(slot_of(free, x));
      key_map(key, c.id, link.map);
      key += ';';
      n.kids.push_back(std::move(link));
    }
    return {add(std::move(n), key), free};
  }

  // Atoms that must hold for the quantifier body to matter: top-level
  // conjuncts under exists, antecedent conjuncts under forall. A chain of
  // quantifiers of the same kind is looked through, skipping atoms that
  // mention the inner bound variables.
  std::vector<Guard> collect_guards(const CNode& q, Node kind, std::vector<Filter>& filters) {
    static constexpr std::uint16_t kInner = 0xFFFF;
    std::vector<Guard> out;
    const std::uint16_t bound = q.arity;
    std::vector<std::uint16_t> top_map = q.kids[0].map;
    auto through = [&](const CNode& n, const std::vector<std::uint16_t>& map) {
      std::vector<std::uint16_t> m2;
      for (auto s : n.kids[0].map) m2.push_back(s == n.arity ? kInner : map[s]);
      return m2;
    };
    auto consider_filter = [&](std::uint32_t id, const std::vector<std::uint16_t>& map) {
      const bool mentions = std::find(map.begin(), map.end(), bound) != map.end();
      const bool inner = std::find(map.begin(), map.end(), kInner) != map.end();
      if (mentions && !inner && map.size() <= 3) filters.push_back({id, map});
    };
    std::function<void(std::uint32_t, const std::vector<std::uint16_t>&)> antecedents;
    std::function<void(std::uint32_t, const std::vector<std::uint16_t>&)> conjuncts =
        [&](std::uint32_t id, const std::vector<std::uint16_t>& map) {
          const CNode& n = nodes[id];
          if (kind == Node::Exists && n.kind == Node::Exists) {
            conjuncts(n.kids[0].child, through(n, map));
            return;
          }
          if (n.kind == Node::And) {
            for (const auto& l : n.kids) {
              std::vector<std::uint16_t> m2;
              for (auto s : l.map) m2.push_back(map[s]);
              conjuncts(l.child, m2);
            }
            return;
          }
          if (!is_atom(n.kind)) {
            consider_filter(id, map);
            return;
          }
          Guard g{n.kind, {}, -1};
          int hits = 0;
          for (std::size_t p = 0; p < n.atom_slots.size(); ++p) {
            g.slots.push_back(map[n.atom_slots[p]]);
            if (g.slots.back() == kInner) return;
            if (g.slots.back() == bound) {
              g.bound_pos = static_cast<int>(p);
              ++hits;
            }
          }
          if (hits == 1) out.push_back(std::move(g));
        };
    antecedents = [&](std::uint32_t id, const std::vector<std::uint16_t>& map) {
          const CNode& n = nodes[id];
          if (n.kind == Node::Forall) {
            antecedents(n.kids[0].child, through(n, map));
            return;
          }
          if (n.kind != Node::Implies) return;
          for (std::size_t c = 0; c < 2; ++c) {
            std::vector<std::uint16_t> m2;
            for (auto s : n.kids[c].map) m2.push_back(map[s]);
            if (c == 0) conjuncts(n.kids[c].child, m2);
            else antecedents(n.kids[c].child, m2);
          }
        };
    if (kind == Node::Exists) conjuncts(q.kids[0].child, top_map);
    else antecedents(q.kids[0].child, top_map);
    return out;
  }

  bool eval(std::uint32_t id, const std::size_t* env) {
    CNode& n = nodes[id];
    switch (n.kind) {
      case Node::True: return true;
      case Node::False: return false;
      case Node::Eq:
      case Node::Leq:
      case Node::Edge:
      case Node::Plus:
      case Node::Times: {
        std::size_t v[3];
        for (std::size_t p = 0; p < n.atom_slots.size(); ++p) v[p] = env[n.atom_slots[p]];
        return m.holds(n.kind, v);
      }
      case Node::Not: return !eval_link(n.kids[0], env);
      case Node::And:
        for (const auto& l : n.kids)
          if (!eval_link(l, env)) return false;
        return true;
      case Node::Or:
        for (const auto& l : n.kids)
          if (eval_link(l, env)) return true;
        return false;
      case Node::Implies: return !eval_link(n.kids[0], env) || eval_link(n.kids[1], env);
      case Node::Forall:
      case Node::Exists: return eval_quant(id, env);
    }
    return false;
  }

  bool eval_link(const Link& l, const std::size_t* env) {
    std::size_t sub[kMaxEnv];
    for (std::size_t s = 0; s < l.map.size(); ++s) sub[s] = env[l.map[s]];
    return eval(l.child, sub);
  }

  // Extensions of filters, keyed by node and outer values.
  std::map<std::vector<std::size_t>, std::vector<std::size_t>> extensions;

  // Unary extensions range over the whole universe; the others only over
  // the owning quantifier's base, so the key names that quantifier too.
  const std::vector<std::size_t>& extension(std::uint32_t q, const Filter& f, const std::size_t* qenv) {
    const std::uint16_t bound = nodes[q].arity;
    const bool unary = f.slots.size() == 1;
    std::vector<std::size_t> key{f.node, unary ? SIZE_MAX : q};
    for (auto s : f.slots)
      if (s != bound) key.push_back(qenv[s]);
    auto it = extensions.find(key);
    if (it != extensions.end()) return it->second;
    std::size_t sub[kMaxEnv];
    std::vector<std::size_t> ext;
    auto test = [&](std::size_t t) {
      for (std::size_t k = 0; k < f.slots.size(); ++k) sub[k] = f.slots[k] == bound ? t : qenv[f.slots[k]];
      if (eval(f.node, sub)) ext.push_back(t);
    };
    if (unary) {
      for (std::size_t t = 0; t < m.size(); ++t) test(t);
    } else {
      for (std::size_t t : base_of(q)) test(t);
    }
    return extensions.emplace(std::move(key), std::move(ext)).first->second;
  }

  const std::vector<std::size_t>& base_of(std::uint32_t q) {
    if (!nodes[q].base_ready) {
      std::vector<std::size_t> b;
      for (std::size_t t = 0; t < m.size(); ++t) b.push_back(t);
      for (std::size_t i = 0; i < nodes[q].filters.size(); ++i) {
        const Filter f = nodes[q].filters[i];
        if (f.slots.size() != 1) continue;
        const auto& e = extension(q, f, nullptr);
        std::vector<std::size_t> keep;
        std::set_intersection(b.begin(), b.end(), e.begin(), e.end(), std::back_inserter(keep));
        b.swap(keep);
      }
      nodes[q].base = std::move(b);
      nodes[q].base_ready = true;
    }
    return nodes[q].base;
  }

  bool eval_quant(std::uint32_t id, const std::size_t* env) {
    const std::uint16_t arity = nodes[id].arity;
    std::uint64_t small = 0;
    std::string big;
    const bool use_small = small_keys && arity <= 4;
    if (use_small) {
      for (std::uint16_t s = 0; s < arity; ++s) small = (small << 16) | env[s];
      auto it = nodes[id].memo_small.find(small);
      if (it != nodes[id].memo_small.end()) {
        ++stats.memo_hits;
        return it->second;
      }
    } else {
      big.assign(reinterpret_cast<const char*>(env), arity * sizeof(std::size_t));
      auto it = nodes[id].memo_big.find(big);
      if (it != nodes[id].memo_big.end()) {
        ++stats.memo_hits;
        return it->second;
      }
    }
    ++stats.quantifier_evals;

    std::size_t qenv[kMaxEnv];
    std::copy(env, env + arity, qenv);
    const bool is_exists = nodes[id].kind == Node::Exists;

    // narrowest guard
    std::vector<std::size_t> best, scratch;
    bool have = false;
    for (const auto& g : nodes[id].guards) {
      std::size_t v[3];
      for (std::size_t p = 0; p < g.slots.size(); ++p)
        v[p] = static_cast<int>(p) == g.bound_pos ? 0 : qenv[g.slots[p]];
      if (!m.candidates(g.atom, g.bound_pos, v, scratch)) continue;
      if (!have || scratch.size() < best.size()) {
        best.swap(scratch);
        have = true;
        if (best.empty()) break;
      }
    }

    // Filters pay off only when the atom guards leave a wide range. The
    // range becomes the smallest list thinned by every other extension;
    // guard atoms are still checked by the body itself.
    std::vector<std::size_t> narrow;
    bool use_narrow = false;
    if ((!have || best.size() > kFilterThreshold) && !nodes[id].filters.empty()) {
      std::vector<const std::vector<std::size_t>*> exts{&base_of(id)};
      for (std::size_t i = 0; i < nodes[id].filters.size(); ++i) {
        const Filter f = nodes[id].filters[i];
        if (f.slots.size() != 1) exts.push_back(&extension(id, f, qenv));
      }
      std::sort(exts.begin(), exts.end(), [](auto a, auto b) { return a->size() < b->size(); });
      const std::vector<std::size_t>& start = (have && best.size() < exts[0]->size()) ? best : *exts[0];
      for (std::size_t t : start) {
        bool keep = true;
        for (const auto* e : exts)
          if (e != &start && !std::binary_search(e->begin(), e->end(), t)) {
            keep = false;
            break;
          }
        if (keep) narrow.push_back(t);
      }
      use_narrow = true;
    }

    bool result = !is_exists;
    auto visit = [&](std::size_t t) {
      qenv[arity] = t;
      bool b = eval_link(nodes[id].kids[0], qenv);
      if (is_exists && b) {
        result = true;
        return true;
      }
      if (!is_exists && !b) {
        result = false;
        return true;
      }
      return false;
    };
    if (use_narrow) {
      for (std::size_t t : narrow)
        if (visit(t)) break;
    } else if (have) {
      for (std::size_t t : best)
        if (visit(t)) break;
    } else {
      for (std::size_t t = 0; t < m.size(); ++t)
        if (visit(t)) break;
    }

    if (use_small) nodes[id].memo_small.emplace(small, result);
    else nodes[id].memo_big.emplace(std::move(big), result);
    return result;
  }
};

ModelChecker::ModelChecker(const Structure& m, const F& f) : impl_(std::make_unique<Impl>(m)) {
  if (auto sig = signature_of(f); sig && *sig != m.signature())
    throw std::invalid_argument("signature mismatch: " + to_string(*sig) + " formula on a " +
                                to_string(m.signature()) + " structure");
  Compiled c = impl_->compile(f);
  impl_->compiled.clear();
  impl_->root = c.id;
  impl_->root_free = c.free;
  impl_->stats.nodes = impl_->nodes.size();
}

ModelChecker::~ModelChecker() = default;
ModelChecker::ModelChecker(ModelChecker&&) noexcept = default;
ModelChecker& ModelChecker::operator=(ModelChecker&&) noexcept = default;

const std::vector<std::string>& ModelChecker::free_variables() const { return impl_->root_free; }

bool ModelChecker::eval(const Assignment& a) {
  std::vector<std::size_t> values;
  for (const auto& v : impl_->root_free) {
    auto it = a.find(v);
    if (it == a.end()) throw std::invalid_argument("free variable '" + v + "' is unassigned");
    values.push_back(it->second);
  }
  return eval_tuple(values);
}

bool ModelChecker::eval_tuple(const std::vector<std::size_t>& values) {
  if (values.size() != impl_->root_free.size()) throw std::invalid_argument("wrong number of values");
  for (auto v : values)
    if (v >= impl_->m.size()) throw std::invalid_argument("value outside the structure");
  return impl_->eval(impl_->root, values.data());
}

const CheckStats& ModelChecker::stats() const { return impl_->stats; }

bool model_check(const F& f, const Structure& m, const Assignment& a) {
  ModelChecker mc(m, f);
  return mc.eval(a);
}

}  // namespace ceerlab::logic
