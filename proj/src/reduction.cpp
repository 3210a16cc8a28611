#include "ceerlab/reduction.hpp"

#include <cctype>
#include <stdexcept>

namespace ceerlab {

namespace ex {
namespace {
ExprPtr node(Expr::Op op, ExprPtr a = nullptr, ExprPtr b = nullptr) {
  auto e = std::make_shared<Expr>();
  e->op = op;
  e->a = std::move(a);
  e->b = std::move(b);
  return e;
}
}  // namespace

ExprPtr var() { return node(Expr::Op::Var); }
ExprPtr lit(Nat v) {
  auto e = std::make_shared<Expr>();
  e->op = Expr::Op::Const;
  e->value = v;
  return e;
}
ExprPtr add(ExprPtr a, ExprPtr b) { return node(Expr::Op::Add, std::move(a), std::move(b)); }
ExprPtr mul(ExprPtr a, ExprPtr b) { return node(Expr::Op::Mul, std::move(a), std::move(b)); }
ExprPtr monus(ExprPtr a, ExprPtr b) { return node(Expr::Op::Monus, std::move(a), std::move(b)); }
ExprPtr pair(ExprPtr a, ExprPtr b) { return node(Expr::Op::Pair, std::move(a), std::move(b)); }
ExprPtr fst(ExprPtr a) { return node(Expr::Op::Fst, std::move(a)); }
ExprPtr snd(ExprPtr a) { return node(Expr::Op::Snd, std::move(a)); }
ExprPtr apply(const ReductionFn& f, ExprPtr a) {
  auto e = std::make_shared<Expr>();
  e->op = Expr::Op::Apply;
  e->a = std::move(a);
  e->fn = std::make_shared<const ReductionFn>(f);
  return e;
}
}  // namespace ex

Nat eval(const Expr& e, Nat x) {
  switch (e.op) {
    case Expr::Op::Var: return x;
    case Expr::Op::Const: return e.value;
    case Expr::Op::Add: return eval(*e.a, x) + eval(*e.b, x);
    case Expr::Op::Mul: return eval(*e.a, x) * eval(*e.b, x);
    case Expr::Op::Monus: {
      const Nat l = eval(*e.a, x), r = eval(*e.b, x);
      return l > r ? l - r : 0;
    }
    case Expr::Op::Pair: return pair(eval(*e.a, x), eval(*e.b, x));
    case Expr::Op::Fst: return proj0(eval(*e.a, x));
    case Expr::Op::Snd: return proj1(eval(*e.a, x));
    case Expr::Op::Apply: return (*e.fn)(eval(*e.a, x));
  }
  return 0;
}

std::string to_string(const Expr& e) {
  switch (e.op) {
    case Expr::Op::Var: return "x";
    case Expr::Op::Const: return std::to_string(e.value);
    case Expr::Op::Add: return "(" + to_string(*e.a) + " + " + to_string(*e.b) + ")";
    case Expr::Op::Mul: return "(" + to_string(*e.a) + " * " + to_string(*e.b) + ")";
    case Expr::Op::Monus: return "(" + to_string(*e.a) + " - " + to_string(*e.b) + ")";
    case Expr::Op::Pair: return "pair(" + to_string(*e.a) + ", " + to_string(*e.b) + ")";
    case Expr::Op::Fst: return "fst(" + to_string(*e.a) + ")";
    case Expr::Op::Snd: return "snd(" + to_string(*e.a) + ")";
    case Expr::Op::Apply: return "[" + e.fn->to_string() + "](" + to_string(*e.a) + ")";
  }
  return "?";
}

ReductionFn::ReductionFn() : expr_(ex::var()) {}

ReductionFn ReductionFn::from_expr(ExprPtr e) {
  if (!e) throw std::invalid_argument("null expression");
  ReductionFn f;
  f.expr_ = std::move(e);
  return f;
}

ReductionFn ReductionFn::from_table(std::vector<Nat> table, bool periodic) {
  if (periodic && table.empty()) throw std::invalid_argument("periodic table must be nonempty");
  ReductionFn f;
  f.expr_ = nullptr;
  f.table_ = std::move(table);
  f.periodic_ = periodic;
  return f;
}

ReductionFn ReductionFn::with_table(std::vector<Nat> table) const {
  ReductionFn f = *this;
  f.table_ = std::move(table);
  f.periodic_ = false;
  return f;
}

ReductionFn ReductionFn::compose(const ReductionFn& outer, const ReductionFn& inner) {
  return from_expr(ex::apply(outer, ex::apply(inner, ex::var())));
}

Nat ReductionFn::operator()(Nat x) const {
  if (periodic_) return table_[x % table_.size()];
  if (x < table_.size()) return table_[x];
  if (!expr_) throw std::out_of_range("reduction not defined at " + std::to_string(x));
  return eval(*expr_, x);
}

std::string ReductionFn::to_string() const {
  std::string out;
  if (!table_.empty()) {
    out += periodic_ ? "periodic{" : "table{";
    for (std::size_t i = 0; i < table_.size(); ++i) {
      if (i) out += ",";
      out += std::to_string(table_[i]);
    }
    out += "}";
    if (expr_ && !periodic_) out += " else ";
  }
  if (expr_ && !periodic_) out += ceerlab::to_string(*expr_);
  return out;
}

// Recursive descent:
//   expr   := term { ('+' | '-') term }
//   term   := factor { '*' factor }
//   factor := number | 'x' | '(' expr ')' | ('pair' '(' expr ',' expr ')')
//           | ('fst' | 'snd') '(' expr ')'
namespace {
class ExprParser {
 public:
  explicit ExprParser(std::string_view s) : s_(s) {}

  ExprPtr parse_all() {
    auto e = expr();
    skip();
    if (pos_ != s_.size()) fail("trailing input");
    return e;
  }

 private:
  std::string_view s_;
  std::size_t pos_ = 0;

  [[noreturn]] void fail(const std::string& what) const {
    throw std::invalid_argument("expression parse error at " + std::to_string(pos_) + ": " + what);
  }
  void skip() {
    while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
  }
  bool eat(char c) {
    skip();
    if (pos_ < s_.size() && s_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }
  void expect(char c) {
    if (!eat(c)) fail(std::string("expected '") + c + "'");
  }
  ExprPtr expr() {
    auto e = term();
    for (;;) {
      if (eat('+')) e = ex::add(e, term());
      else if (eat('-')) e = ex::monus(e, term());
      else return e;
    }
  }
  ExprPtr term() {
    auto e = factor();
    while (eat('*')) e = ex::mul(e, factor());
    return e;
  }
  ExprPtr factor() {
    skip();
    if (pos_ >= s_.size()) fail("unexpected end");
    if (eat('(')) {
      auto e = expr();
      expect(')');
      return e;
    }
    if (std::isdigit(static_cast<unsigned char>(s_[pos_]))) {
      Nat v = 0;
      while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_])))
        v = v * 10 + static_cast<Nat>(s_[pos_++] - '0');
      return ex::lit(v);
    }
    std::string word;
    while (pos_ < s_.size() && std::isalpha(static_cast<unsigned char>(s_[pos_]))) word += s_[pos_++];
    if (word == "x") return ex::var();
    if (word == "pair") {
      expect('(');
      auto a = expr();
      expect(',');
      auto b = expr();
      expect(')');
      return ex::pair(a, b);
    }
    if (word == "fst" || word == "snd") {
      expect('(');
      auto a = expr();
      expect(')');
      return word == "fst" ? ex::fst(a) : ex::snd(a);
    }
    fail("unknown token '" + word + "'");
  }
};
}  // namespace

ReductionFn ReductionFn::parse(std::string_view text) { return from_expr(ExprParser(text).parse_all()); }

}  // namespace ceerlab
