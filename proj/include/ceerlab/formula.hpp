#pragma once

#include <map>
#include <memory>
#include <optional>
#include <set>
#include <string>
#include <vector>

namespace ceerlab::logic {

enum class Signature { Arith, Graph, Poset };
std::string to_string(Signature s);

enum class Node { True, False, Eq, Leq, Edge, Plus, Times, Not, And, Or, Implies, Forall, Exists };

struct Formula;
using F = std::shared_ptr<const Formula>;

/// Immutable first-order formula. Atoms keep their arguments in `args`
/// (two for Eq/Leq/Edge, three for Plus/Times: x+y=z). Quantifiers keep the
/// bound variable in args[0] and the body in kids[0]. And/Or are n-ary.
/// Macro expansion shares subformulas heavily, so a formula is a DAG whose
/// unfolded tree can be exponentially larger; every pass here works on the
/// DAG. `free` caches the sorted free variables.
struct Formula {
  Node node;
  std::vector<std::string> args;
  std::vector<F> kids;
  std::vector<std::string> free;
};

F top();
F bottom();
F eq(const std::string& a, const std::string& b);
F leq(const std::string& a, const std::string& b);
F edge(const std::string& a, const std::string& b);
F plus(const std::string& x, const std::string& y, const std::string& z);
F times(const std::string& x, const std::string& y, const std::string& z);
F neg(F f);
/// Empty list gives top()/bottom(); a single formula is returned unchanged.
F conj(std::vector<F> fs);
F disj(std::vector<F> fs);
F implies(F a, F b);
F iff(F a, F b);
F forall(const std::string& v, F body);
F exists(const std::string& v, F body);
F forall_vars(const std::vector<std::string>& vs, F body);
F exists_vars(const std::vector<std::string>& vs, F body);

/// Shorthands over <= used throughout the poset macros.
F lt(const std::string& a, const std::string& b);
F incomparable(const std::string& a, const std::string& b);

bool is_atom(Node n);
bool structurally_equal(const F& a, const F& b);
bool alpha_equivalent(const F& a, const F& b);

std::set<std::string> free_vars(const F& f);
/// Every variable name occurring in f, bound or free.
std::set<std::string> all_vars(const F& f);
/// Size of the unfolded tree (saturates at SIZE_MAX) and of the shared DAG.
std::size_t size(const F& f);
std::size_t dag_size(const F& f);
std::size_t quantifier_depth(const F& f);

/// Signature of the non-equality atoms; nullopt for pure-equality formulas.
/// Throws std::invalid_argument on mixed atoms.
std::optional<Signature> signature_of(const F& f);

/// Capture-avoiding simultaneous renaming of free variables. Bound
/// variables that would capture a substituted name get primes appended.
F instantiate(const F& f, const std::map<std::string, std::string>& renaming);

/// Deterministic supply of variable names avoiding a reserved set.
class NameSupply {
 public:
  NameSupply() = default;
  explicit NameSupply(std::set<std::string> reserved) : reserved_(std::move(reserved)) {}
  void reserve(const std::string& name) { reserved_.insert(name); }
  void reserve(const F& f);
  std::string fresh(const std::string& hint);

 private:
  std::set<std::string> reserved_;
  std::map<std::string, std::size_t> next_;
};

/// Infix text: "forall x. exists y. x <= y & !(y = x)". Precedence
/// ! > & > | > ->, implication associates to the right.
std::string print(const F& f);
/// Throws std::invalid_argument with the offending position.
F parse(const std::string& text);

}  // namespace ceerlab::logic
