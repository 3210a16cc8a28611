#pragma once

#include <cstdint>
#include <map>
#include <memory>
#include <string>
#include <vector>

#include "ceerlab/formula.hpp"
#include "ceerlab/structures.hpp"

namespace ceerlab::logic {

/// A finite structure for one signature. Graphs and posets are referenced,
/// not copied; the caller keeps them alive. Arithmetic fragments are the
/// partial structures ({0..N}, +, x) with x+y=z true only when all three
/// are in range.
class Structure {
 public:
  static Structure graph(const FiniteGraph& g);
  static Structure poset(const FinitePoset& p);
  static Structure arithmetic(std::size_t n_max);

  Signature signature() const noexcept { return sig_; }
  std::size_t size() const noexcept { return size_; }
  std::string element_name(std::size_t v) const;
  /// Element by display name (numerals for arithmetic fragments).
  std::size_t element(const std::string& name) const;

  bool holds(Node atom, const std::size_t* v) const;
  /// Elements t with atom(args) true when args[slot] := t and every other
  /// argument is fixed by `v`. Returns false when no cheap enumeration exists.
  bool candidates(Node atom, int slot, const std::size_t* v, std::vector<std::size_t>& out) const;

 private:
  Signature sig_ = Signature::Graph;
  std::size_t size_ = 0;
  const FiniteGraph* graph_ = nullptr;
  const FinitePoset* poset_ = nullptr;
};

using Assignment = std::map<std::string, std::size_t>;

struct CheckStats {
  std::uint64_t quantifier_evals = 0;
  std::uint64_t memo_hits = 0;
  std::size_t nodes = 0;
};

/// Compiles a formula once and evaluates it under many assignments.
/// Subformulas are shared up to renaming of variables, and quantifier
/// results are memoized per tuple of free-variable values, so repeated
/// macro instances cost one evaluation per argument tuple.
class ModelChecker {
 public:
  /// Throws std::invalid_argument when the formula's signature differs
  /// from the structure's.
  ModelChecker(const Structure& m, const F& f);
  ~ModelChecker();
  ModelChecker(ModelChecker&&) noexcept;
  ModelChecker& operator=(ModelChecker&&) noexcept;

  /// Free variables of the formula, in the order eval_tuple expects them.
  const std::vector<std::string>& free_variables() const;
  /// Throws std::invalid_argument when a free variable is unassigned or
  /// out of range.
  bool eval(const Assignment& a);
  bool eval_tuple(const std::vector<std::size_t>& values);
  const CheckStats& stats() const;

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

/// One-shot convenience wrapper.
bool model_check(const F& f, const Structure& m, const Assignment& a = {});

}  // namespace ceerlab::logic
