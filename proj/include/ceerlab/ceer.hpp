#pragma once

#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "ceerlab/pairing.hpp"
#include "ceerlab/reduction.hpp"
#include "ceerlab/union_find.hpp"

namespace ceerlab {

using Edge = std::pair<Nat, Nat>;
using PairBatch = std::vector<Edge>;
/// Stage-indexed pair enumerator: stream(s) is the batch enumerated at stage s.
using PairStream = std::function<PairBatch(Stage)>;

class StagedCeer;

/// A ceer with finitely many classes. The partition of {0..p-1} is repeated
/// with period p over all of N, so x ~ y iff label(x mod p) == label(y mod p).
class FiniteCeer {
 public:
  static FiniteCeer from_labels(const std::vector<std::size_t>& labels);
  static FiniteCeer from_classes(const std::vector<std::vector<Nat>>& classes);

  std::size_t period() const noexcept { return labels_.size(); }
  std::size_t num_classes() const noexcept { return classes_; }
  std::size_t label(Nat x) const noexcept { return labels_[x % labels_.size()]; }
  bool equivalent(Nat x, Nat y) const noexcept { return label(x) == label(y); }
  const std::vector<std::size_t>& labels() const noexcept { return labels_; }
  /// Least element of each class, indexed by label.
  std::vector<Nat> representatives() const;

  /// Classes of {0..u-1}, each sorted, ordered by least element.
  std::vector<std::vector<Nat>> window(Nat u) const;
  /// Staged copy on {0..u-1}: everything is enumerated at stage 0, and
  /// distinct classes are certified separate.
  StagedCeer to_staged(Nat u) const;

  bool operator==(const FiniteCeer& o) const = default;

 private:
  std::vector<std::size_t> labels_;  // canonical: first-occurrence numbering
  std::size_t classes_ = 0;
};

/// A ceer as a monotone sequence of partitions of {0..universe_bound-1},
/// driven by a pair stream. Pairs reaching outside the bound are dropped.
class StagedCeer {
 public:
  /// certified_separate(x, y, s) may return true only if x and y are never
  /// collapsed at any stage.
  using Separator = std::function<bool(Nat, Nat, Stage)>;

  StagedCeer(Nat universe_bound, PairStream stream, Separator separator = {});
  StagedCeer(const StagedCeer& o);
  StagedCeer& operator=(const StagedCeer& o);
  StagedCeer(StagedCeer&&) noexcept;
  StagedCeer& operator=(StagedCeer&&) noexcept;
  ~StagedCeer();

  Nat universe_bound() const noexcept { return universe_; }
  const PairStream& stream() const noexcept { return stream_; }
  const Separator& separator() const noexcept { return separator_; }

  /// Pairs of stage s, restricted to the universe.
  const PairBatch& batch(Stage s) const;
  /// Canonical labels of 0..u-1 at stage s.
  std::vector<std::size_t> snapshot(Stage s) const;
  std::vector<std::vector<Nat>> classes(Stage s) const;
  std::size_t class_count(Stage s) const;
  bool equivalent(Nat x, Nat y, Stage s) const;
  /// Merges (pairs that joined two distinct classes) performed at stage s.
  const PairBatch& frontier(Stage s) const;
  bool certified_separate(Nat x, Nat y, Stage s) const;

 private:
  struct Cache;
  void advance(Stage s) const;
  UnionFind& state_at(Stage s) const;

  Nat universe_;
  PairStream stream_;
  Separator separator_;
  mutable std::unique_ptr<Cache> cache_;
};

using Ceer = std::variant<FiniteCeer, StagedCeer>;

bool equivalent(const Ceer& c, Nat x, Nat y, Stage s);
bool certified_separate(const Ceer& c, Nat x, Nat y, Stage s);
/// Number of elements considered materialized (unbounded for finite ceers).
std::optional<Nat> universe_of(const Ceer& c);
StagedCeer as_staged(const Ceer& c, Nat universe_for_finite);

/// A c.e. set given by the stage at which each element appears.
class CeSet {
 public:
  /// Explicit finite script of (element, stage) events.
  static CeSet scripted(std::vector<std::pair<Nat, Stage>> events);
  /// Decidable set, fully enumerated at stage 0.
  static CeSet decidable(std::function<bool(Nat)> pred, std::string description = {});
  static CeSet all() {
    return decidable([](Nat) { return true; }, "N");
  }

  std::optional<Stage> enumerated_at(Nat x) const;
  bool member(Nat x, Stage s) const {
    auto t = enumerated_at(x);
    return t && *t <= s;
  }
  /// Elements enumerated by stage s that are below `bound`, sorted.
  std::vector<Nat> elements(Stage s, Nat bound) const;
  /// Largest scripted element; empty for decidable sets.
  std::optional<Nat> max_element() const;
  /// After this stage nothing new is enumerated.
  Stage settled_stage() const noexcept { return settled_; }
  bool is_scripted() const noexcept { return !pred_; }
  const std::vector<std::pair<Nat, Stage>>& events() const noexcept { return events_; }

 private:
  std::vector<std::pair<Nat, Stage>> events_;  // sorted by element, first occurrence only
  std::function<bool(Nat)> pred_;
  Stage settled_ = 0;
};

// ---- constructors -------------------------------------------------------

FiniteCeer id_n(Nat n);
/// Id on {0..u-1}: no pairs ever, every pair certified separate.
StagedCeer identity_ceer(Nat u);
/// Replays a recorded list of per-stage batches; later stages are empty.
/// With `complete`, classes apart after the last batch are certified separate.
StagedCeer recorded_ceer(Nat u, std::vector<PairBatch> stages, bool complete = false);

// ---- algebra ------------------------------------------------------------

FiniteCeer uniform_join(const FiniteCeer& r, const FiniteCeer& s);
StagedCeer uniform_join(const StagedCeer& r, const StagedCeer& s);
Ceer uniform_join(const Ceer& r, const Ceer& s);

/// Element x of the join lives in summand x mod m at position x div m.
FiniteCeer uniform_join_many(const std::vector<FiniteCeer>& parts);
StagedCeer uniform_join_many(const std::vector<StagedCeer>& parts);
inline Nat join_many_encode(Nat index, Nat x, Nat m) { return x * m + index; }

struct RestrictionResult {
  StagedCeer ceer;
  std::vector<std::string> warnings;
};
/// x ~ y iff h(x) E h(y), on {0..out_universe-1}. Throws std::domain_error if
/// some h(x) is outside W once W has settled, or outside E's universe.
RestrictionResult restriction(const StagedCeer& e, const CeSet& w, const ReductionFn& h,
                              Nat out_universe);
/// Finite restriction to the periodic set W = {x : w_residues[x mod q]},
/// along its increasing enumeration.
FiniteCeer restriction(const FiniteCeer& e, const std::vector<bool>& w_residues);

StagedCeer quotient(const StagedCeer& e, PairStream w);
FiniteCeer quotient(const FiniteCeer& e, const PairBatch& w);
PairStream column_code(Nat n, const StagedCeer& e);
StagedCeer iota(const StagedCeer& x);

// ---- reductions ---------------------------------------------------------

struct Obligation {
  enum class Direction { Forward, Backward };
  Nat x = 0, y = 0;
  Direction direction = Direction::Forward;
};

struct ReductionVerdict {
  enum class Kind { ConsistentUpTo, HardViolation };
  Kind kind = Kind::ConsistentUpTo;
  Nat bound = 0;
  Stage stage = 0;
  /// Pending pairs (ConsistentUpTo) or the single refuted pair (HardViolation).
  std::vector<Obligation> obligations;
  bool ok() const noexcept { return kind == Kind::ConsistentUpTo; }
};

/// Semi-decision for "f reduces R to S" on x, y < bound at `stage`. Failure
/// is reported only when the other side certifies separation.
ReductionVerdict check_reduction_window(const Ceer& r, const Ceer& s, const ReductionFn& f,
                                        Nat bound, Stage stage);

struct BruteForceResult {
  bool reduces = false;
  std::vector<std::size_t> class_map;  // R-class label -> S-class label
  std::optional<ReductionFn> witness;  // periodic table on R's period
};
BruteForceResult brute_force_reduces(const FiniteCeer& r, const FiniteCeer& s, bool want_witness = true);
inline bool finite_equiv(const FiniteCeer& a, const FiniteCeer& b) {
  return brute_force_reduces(a, b, false).reduces && brute_force_reduces(b, a, false).reduces;
}

std::string describe(const FiniteCeer& c, Nat window_size);

}  // namespace ceerlab
