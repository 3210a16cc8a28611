#include "ceerlab/formula.hpp"

#include <cctype>
#include <functional>
#include <stdexcept>
#include <unordered_map>
#include <unordered_set>
#include <cstdint>

namespace ceerlab::logic {

std::string to_string(Signature s) {
  switch (s) {
    case Signature::Arith: return "arith";
    case Signature::Graph: return "graph";
    case Signature::Poset: return "poset";
  }
  return "?";
}

namespace {
F make(Node n, std::vector<std::string> args, std::vector<F> kids) {
  std::set<std::string> fv;
  if (n == Node::Forall || n == Node::Exists) {
    fv.insert(kids[0]->free.begin(), kids[0]->free.end());
    fv.erase(args[0]);
  } else {
    fv.insert(args.begin(), args.end());
    for (const auto& k : kids) fv.insert(k->free.begin(), k->free.end());
  }
  auto f = std::make_shared<Formula>();
  f->node = n;
  f->args = std::move(args);
  f->kids = std::move(kids);
  f->free.assign(fv.begin(), fv.end());
  return f;
}

// Visits each shared node once.
void each_node(const F& f, const std::function<void(const Formula&)>& fn) {
  std::unordered_set<const Formula*> seen;
  std::vector<const Formula*> stack{f.get()};
  while (!stack.empty()) {
    const Formula* g = stack.back();
    stack.pop_back();
    if (!seen.insert(g).second) continue;
    fn(*g);
    for (const auto& k : g->kids) stack.push_back(k.get());
  }
}
}  // namespace

F top() {
  static const F t = make(Node::True, {}, {});
  return t;
}
F bottom() {
  static const F f = make(Node::False, {}, {});
  return f;
}
F eq(const std::string& a, const std::string& b) { return make(Node::Eq, {a, b}, {}); }
F leq(const std::string& a, const std::string& b) { return make(Node::Leq, {a, b}, {}); }
F edge(const std::string& a, const std::string& b) { return make(Node::Edge, {a, b}, {}); }
F plus(const std::string& x, const std::string& y, const std::string& z) {
  return make(Node::Plus, {x, y, z}, {});
}
F times(const std::string& x, const std::string& y, const std::string& z) {
  return make(Node::Times, {x, y, z}, {});
}
F neg(F f) { return make(Node::Not, {}, {std::move(f)}); }

F conj(std::vector<F> fs) {
  if (fs.empty()) return top();
  if (fs.size() == 1) return fs[0];
  return make(Node::And, {}, std::move(fs));
}
F disj(std::vector<F> fs) {
  if (fs.empty()) return bottom();
  if (fs.size() == 1) return fs[0];
  return make(Node::Or, {}, std::move(fs));
}
F implies(F a, F b) { return make(Node::Implies, {}, {std::move(a), std::move(b)}); }
F iff(F a, F b) { return conj({implies(a, b), implies(b, a)}); }
F forall(const std::string& v, F body) { return make(Node::Forall, {v}, {std::move(body)}); }
F exists(const std::string& v, F body) { return make(Node::Exists, {v}, {std::move(body)}); }
F forall_vars(const std::vector<std::string>& vs, F body) {
  for (auto it = vs.rbegin(); it != vs.rend(); ++it) body = forall(*it, std::move(body));
  return body;
}
F exists_vars(const std::vector<std::string>& vs, F body) {
  for (auto it = vs.rbegin(); it != vs.rend(); ++it) body = exists(*it, std::move(body));
  return body;
}

F lt(const std::string& a, const std::string& b) { return conj({leq(a, b), neg(eq(a, b))}); }
F incomparable(const std::string& a, const std::string& b) {
  return conj({neg(leq(a, b)), neg(leq(b, a))});
}

bool is_atom(Node n) {
  switch (n) {
    case Node::True:
    case Node::False:
    case Node::Eq:
    case Node::Leq:
    case Node::Edge:
    case Node::Plus:
    case Node::Times:
      return true;
    default:
      return false;
  }
}

namespace {
bool struct_eq(const F& a, const F& b, std::set<std::pair<const Formula*, const Formula*>>& known) {
  if (a == b) return true;
  if (a->node != b->node || a->args != b->args || a->kids.size() != b->kids.size() || a->free != b->free)
    return false;
  if (known.count({a.get(), b.get()})) return true;
  for (std::size_t k = 0; k < a->kids.size(); ++k)
    if (!struct_eq(a->kids[k], b->kids[k], known)) return false;
  known.insert({a.get(), b.get()});
  return true;
}
}  // namespace

bool structurally_equal(const F& a, const F& b) {
  std::set<std::pair<const Formula*, const Formula*>> known;
  return struct_eq(a, b, known);
}

namespace {

bool alpha_rec(const F& a, const F& b, std::vector<std::pair<std::string, std::string>>& env) {
  if (a->node != b->node || a->kids.size() != b->kids.size() || a->args.size() != b->args.size())
    return false;
  if (a->node == Node::Forall || a->node == Node::Exists) {
    env.emplace_back(a->args[0], b->args[0]);
    bool ok = alpha_rec(a->kids[0], b->kids[0], env);
    env.pop_back();
    return ok;
  }
  for (std::size_t k = 0; k < a->args.size(); ++k) {
    const auto& x = a->args[k];
    const auto& y = b->args[k];
    // innermost binder of either name decides
    int ix = -1, iy = -1;
    for (int e = static_cast<int>(env.size()) - 1; e >= 0; --e) {
      if (ix < 0 && env[e].first == x) ix = e;
      if (iy < 0 && env[e].second == y) iy = e;
    }
    if (ix != iy) return false;
    if (ix < 0 && x != y) return false;
  }
  for (std::size_t k = 0; k < a->kids.size(); ++k)
    if (!alpha_rec(a->kids[k], b->kids[k], env)) return false;
  return true;
}

}  // namespace

bool alpha_equivalent(const F& a, const F& b) {
  std::vector<std::pair<std::string, std::string>> env;
  return alpha_rec(a, b, env);
}

std::set<std::string> free_vars(const F& f) { return {f->free.begin(), f->free.end()}; }

std::set<std::string> all_vars(const F& f) {
  std::set<std::string> out;
  each_node(f, [&](const Formula& g) { out.insert(g.args.begin(), g.args.end()); });
  return out;
}

namespace {
template <class T, class Fn>
T fold(const F& f, std::unordered_map<const Formula*, T>& memo, const Fn& fn) {
  auto it = memo.find(f.get());
  if (it != memo.end()) return it->second;
  std::vector<T> sub;
  for (const auto& k : f->kids) sub.push_back(fold(k, memo, fn));
  T r = fn(*f, sub);
  memo.emplace(f.get(), r);
  return r;
}
}  // namespace

std::size_t size(const F& f) {
  std::unordered_map<const Formula*, std::size_t> memo;
  return fold(f, memo, [](const Formula&, const std::vector<std::size_t>& sub) {
    std::size_t n = 1;
    for (auto s : sub) n = (s > SIZE_MAX - n) ? SIZE_MAX : n + s;
    return n;
  });
}

std::size_t dag_size(const F& f) {
  std::size_t n = 0;
  each_node(f, [&](const Formula&) { ++n; });
  return n;
}

std::size_t quantifier_depth(const F& f) {
  std::unordered_map<const Formula*, std::size_t> memo;
  return fold(f, memo, [](const Formula& g, const std::vector<std::size_t>& sub) {
    std::size_t d = 0;
    for (auto s : sub) d = std::max(d, s);
    return d + ((g.node == Node::Forall || g.node == Node::Exists) ? 1 : 0);
  });
}

std::optional<Signature> signature_of(const F& f) {
  std::optional<Signature> sig;
  each_node(f, [&](const Formula& g) {
    std::optional<Signature> here;
    if (g.node == Node::Leq) here = Signature::Poset;
    if (g.node == Node::Edge) here = Signature::Graph;
    if (g.node == Node::Plus || g.node == Node::Times) here = Signature::Arith;
    if (here) {
      if (sig && *sig != *here)
        throw std::invalid_argument("formula mixes " + to_string(*sig) + " and " + to_string(*here) + " atoms");
      sig = here;
    }
  });
  return sig;
}

namespace {

using SubstMemo = std::map<std::pair<const Formula*, std::map<std::string, std::string>>, F>;

F subst_node(const F& f, std::map<std::string, std::string> ren, SubstMemo& memo);

// The renaming only matters on the node's free variables.
F subst(const F& f, const std::map<std::string, std::string>& ren, SubstMemo& memo) {
  std::map<std::string, std::string> used;
  for (const auto& v : f->free) {
    auto it = ren.find(v);
    if (it != ren.end()) used.insert(*it);
  }
  if (used.empty()) return f;
  auto key = std::make_pair(f.get(), used);
  auto it = memo.find(key);
  if (it != memo.end()) return it->second;
  F r = subst_node(f, std::move(used), memo);
  memo.emplace(std::move(key), r);
  return r;
}

F subst_node(const F& f, std::map<std::string, std::string> ren, SubstMemo& memo) {
  if (f->node == Node::Forall || f->node == Node::Exists) {
    std::string v = f->args[0];
    ren.erase(v);
    if (ren.empty()) return f;
    const auto fv = free_vars(f->kids[0]);
    std::set<std::string> targets;
    bool touches = false;
    for (const auto& [from, to] : ren) {
      if (fv.count(from)) {
        touches = true;
        targets.insert(to);
      }
    }
    if (!touches) return f;
    F body = f->kids[0];
    if (targets.count(v)) {
      std::string w = v;
      do {
        w += '\'';
      } while (targets.count(w) || fv.count(w));
      ren[v] = w;
      v = w;
    }
    return make(f->node, {v}, {subst(body, ren, memo)});
  }
  std::vector<std::string> args = f->args;
  bool changed = false;
  for (auto& a : args) {
    auto it = ren.find(a);
    if (it != ren.end()) {
      a = it->second;
      changed = true;
    }
  }
  std::vector<F> kids;
  kids.reserve(f->kids.size());
  for (const auto& k : f->kids) {
    kids.push_back(subst(k, ren, memo));
    if (kids.back() != k) changed = true;
  }
  if (!changed) return f;
  return make(f->node, std::move(args), std::move(kids));
}

}  // namespace

F instantiate(const F& f, const std::map<std::string, std::string>& renaming) {
  std::map<std::string, std::string> ren;
  for (const auto& [a, b] : renaming)
    if (a != b) ren.emplace(a, b);
  SubstMemo memo;
  return subst(f, ren, memo);
}

void NameSupply::reserve(const F& f) {
  for (const auto& v : all_vars(f)) reserved_.insert(v);
}

std::string NameSupply::fresh(const std::string& hint) {
  auto& n = next_[hint];
  std::string name;
  do {
    name = hint + std::to_string(n++);
  } while (reserved_.count(name));
  reserved_.insert(name);
  return name;
}

// ---- printing -------------------------------------------------------------

namespace {

// Binding strength: 0 quantifier, 1 implication, 2 disjunction,
// 3 conjunction, 4 negation and atoms.
int strength(Node n) {
  switch (n) {
    case Node::Forall:
    case Node::Exists: return 0;
    case Node::Implies: return 1;
    case Node::Or: return 2;
    case Node::And: return 3;
    default: return 4;
  }
}

void print_rec(const F& f, std::string& out);

void print_operand(const F& f, int need, std::string& out) {
  if (strength(f->node) < need) {
    out += '(';
    print_rec(f, out);
    out += ')';
  } else {
    print_rec(f, out);
  }
}

void print_rec(const F& f, std::string& out) {
  const auto& a = f->args;
  switch (f->node) {
    case Node::True: out += "true"; return;
    case Node::False: out += "false"; return;
    case Node::Eq: out += a[0] + " = " + a[1]; return;
    case Node::Leq: out += a[0] + " <= " + a[1]; return;
    case Node::Edge: out += "E(" + a[0] + ", " + a[1] + ")"; return;
    case Node::Plus: out += a[0] + " + " + a[1] + " = " + a[2]; return;
    case Node::Times: out += a[0] + " * " + a[1] + " = " + a[2]; return;
    case Node::Not: {
      const F& k = f->kids[0];
      out += '!';
      // "!x = y" would read as a negated atom anyway; parenthesize
      // everything but a bare atom so the inverse parse is unambiguous.
      if (is_atom(k->node)) {
        print_rec(k, out);
      } else if (k->node == Node::Not) {
        print_rec(k, out);
      } else {
        out += '(';
        print_rec(k, out);
        out += ')';
      }
      return;
    }
    case Node::And:
    case Node::Or: {
      const char* op = f->node == Node::And ? " & " : " | ";
      for (std::size_t k = 0; k < f->kids.size(); ++k) {
        if (k) out += op;
        // a nested n-ary node of the same kind keeps its own parentheses
        print_operand(f->kids[k], strength(f->node) + 1, out);
      }
      return;
    }
    case Node::Implies:
      print_operand(f->kids[0], 2, out);
      out += " -> ";
      print_operand(f->kids[1], 1, out);
      return;
    case Node::Forall:
    case Node::Exists:
      out += f->node == Node::Forall ? "forall " : "exists ";
      out += a[0] + ". ";
      print_rec(f->kids[0], out);
      return;
  }
}

}  // namespace

std::string print(const F& f) {
  std::string out;
  print_rec(f, out);
  return out;
}

// ---- parsing --------------------------------------------------------------

namespace {

class Parser {
 public:
  explicit Parser(const std::string& s) : s_(s) {}

  F run() {
    F f = formula();
    skip();
    if (pos_ != s_.size()) fail("unexpected trailing input");
    return f;
  }

 private:
  [[noreturn]] void fail(const std::string& what) const {
    throw std::invalid_argument("formula parse error at " + std::to_string(pos_) + ": " + what);
  }

  void skip() {
    while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
  }

  bool accept(const std::string& tok) {
    skip();
    if (s_.compare(pos_, tok.size(), tok) == 0) {
      pos_ += tok.size();
      return true;
    }
    return false;
  }

  void expect(const std::string& tok) {
    if (!accept(tok)) fail("expected '" + tok + "'");
  }

  static bool ident_start(char c) { return std::isalpha(static_cast<unsigned char>(c)) || c == '_'; }
  static bool ident_char(char c) {
    return std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '\'';
  }

  std::optional<std::string> peek_ident() {
    skip();
    if (pos_ >= s_.size() || !ident_start(s_[pos_])) return std::nullopt;
    std::size_t e = pos_;
    while (e < s_.size() && ident_char(s_[e])) ++e;
    return s_.substr(pos_, e - pos_);
  }

  std::string ident() {
    auto id = peek_ident();
    if (!id) fail("expected an identifier");
    pos_ += id->size();
    return *id;
  }

  bool keyword_ahead(const std::string& kw) {
    auto id = peek_ident();
    return id && *id == kw;
  }

  F formula() {
    if (keyword_ahead("forall") || keyword_ahead("exists")) return quant();
    return impl();
  }

  F quant() {
    const bool all = ident() == "forall";
    std::vector<std::string> vars;
    do {
      vars.push_back(ident());
      if (vars.back() == "forall" || vars.back() == "exists") fail("keyword used as a variable");
    } while (!accept("."));
    F body = formula();
    return all ? forall_vars(vars, body) : exists_vars(vars, body);
  }

  F impl() {
    F lhs = disj_();
    if (accept("->")) return implies(lhs, formula());
    return lhs;
  }

  F disj_() {
    std::vector<F> parts{conj_()};
    while (accept("|")) parts.push_back(conj_());
    return disj(std::move(parts));
  }

  F conj_() {
    std::vector<F> parts{unary()};
    while (accept("&")) parts.push_back(unary());
    return conj(std::move(parts));
  }

  F unary() {
    skip();
    if (accept("!")) return neg(unary());
    if (accept("(")) {
      F f = formula();
      expect(")");
      return f;
    }
    if (keyword_ahead("forall") || keyword_ahead("exists")) return quant();
    return atom();
  }

  F atom() {
    if (keyword_ahead("true")) {
      ident();
      return top();
    }
    if (keyword_ahead("false")) {
      ident();
      return bottom();
    }
    if (keyword_ahead("E")) {
      std::size_t save = pos_;
      ident();
      if (accept("(")) {
        std::string a = ident();
        expect(",");
        std::string b = ident();
        expect(")");
        return edge(a, b);
      }
      pos_ = save;
    }
    std::string a = ident();
    if (accept("<=")) return leq(a, ident());
    if (accept("+")) {
      std::string b = ident();
      expect("=");
      return plus(a, b, ident());
    }
    if (accept("*")) {
      std::string b = ident();
      expect("=");
      return times(a, b, ident());
    }
    if (accept("!=")) return neg(eq(a, ident()));
    if (accept("=")) return eq(a, ident());
    fail("expected an atom after '" + a + "'");
  }

  const std::string& s_;
  std::size_t pos_ = 0;
};

}  // namespace

F parse(const std::string& text) { return Parser(text).run(); }

}  // namespace ceerlab::logic
