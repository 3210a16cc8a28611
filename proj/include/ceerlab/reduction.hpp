#pragma once

#include <memory>
#include <string>
#include <string_view>
#include <vector>

#include "ceerlab/pairing.hpp"

namespace ceerlab {

class ReductionFn;

/// Closed-form expression in one variable x.
struct Expr {
  enum class Op { Var, Const, Add, Mul, Monus, Pair, Fst, Snd, Apply };
  Op op = Op::Var;
  Nat value = 0;                            // Const
  std::shared_ptr<const Expr> a, b;         // operands
  std::shared_ptr<const ReductionFn> fn;    // Apply: fn(a)
};
using ExprPtr = std::shared_ptr<const Expr>;

namespace ex {
ExprPtr var();
ExprPtr lit(Nat v);
ExprPtr add(ExprPtr a, ExprPtr b);
ExprPtr mul(ExprPtr a, ExprPtr b);
ExprPtr monus(ExprPtr a, ExprPtr b);  // truncated subtraction
ExprPtr pair(ExprPtr a, ExprPtr b);
ExprPtr fst(ExprPtr a);
ExprPtr snd(ExprPtr a);
ExprPtr apply(const ReductionFn& f, ExprPtr a);
}  // namespace ex

Nat eval(const Expr& e, Nat x);
std::string to_string(const Expr& e);

/// A total computable function, given by an expression with an optional
/// finite table override on 0..n-1. A periodic table answers every x by
/// table[x mod n] and ignores the expression.
class ReductionFn {
 public:
  ReductionFn();  // identity

  static ReductionFn identity() { return ReductionFn(); }
  static ReductionFn from_expr(ExprPtr e);
  static ReductionFn from_table(std::vector<Nat> table, bool periodic = false);
  /// Parses "2*x+1", "pair(3, x)", "fst(x) - 1", ...
  static ReductionFn parse(std::string_view text);
  static ReductionFn compose(const ReductionFn& outer, const ReductionFn& inner);

  ReductionFn with_table(std::vector<Nat> table) const;

  Nat operator()(Nat x) const;
  bool has_expr() const noexcept { return expr_ != nullptr; }
  const std::vector<Nat>& table() const noexcept { return table_; }
  bool periodic() const noexcept { return periodic_; }
  std::string to_string() const;

 private:
  ExprPtr expr_;
  std::vector<Nat> table_;
  bool periodic_ = false;
};

}  // namespace ceerlab
