#pragma once

#include <compare>
#include <functional>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "ceerlab/ceer.hpp"
#include "ceerlab/structures.hpp"

namespace ceerlab::construction {

/// The graph G being coded. edge(i, j, s) must be symmetric, irreflexive
/// and monotone in s.
struct GraphInput {
  std::function<bool(Nat, Nat, Stage)> edge;
  std::optional<Nat> vertex_count;  // set for finite graphs

  static GraphInput from_finite(const FiniteGraph& g);
};

/// Uniformly staged family R_0, R_1, ...: pairs(i, s, bound) is the batch
/// R_i enumerates at stage s, restricted to elements below `bound`.
struct GeneratorFamily {
  std::string spec;
  std::string claimed_properties = "none";
  std::function<PairBatch(Nat, Stage, Nat)> pairs;

  /// Closure of R_i's batches through stage s on {0..bound-1}.
  StagedCeer member(Nat i, Nat bound) const;
};

/// "id", "idn:K", "mod", "random:SEED", or "file:PATH".
GeneratorFamily make_family(const std::string& spec);

enum class ReqKind { Code = 0, Edge = 1, Dark = 2 };
struct Requirement {
  ReqKind kind;
  Nat index;
};
/// Code_0 < Edge_0 < Dark_0 < Code_1 < ...
std::strong_ordering priority_order(const Requirement& a, const Requirement& b);

/// Edge_i is binding iff G has an edge between (i)_0 != (i)_1 and i is the
/// smaller of <a,b> and <b,a>.
bool edge_binding(const GraphInput& g, Nat i, Stage s);

struct Column {
  enum class Kind { Coding, QuotientEdge, Block };
  Kind kind = Kind::Coding;
  Nat first = 0, last = 0;  // column range, inclusive; equal unless Block
  Nat index = 0;            // the i of gamma_i / epsilon_i
  Nat a = 0, b = 0;         // QuotientEdge: codes (R_a (+) R_b)/(x,y)
};

struct Config {
  bool finite_mode = true;       // drop all Dark requirements
  Edge quotient_pair{0, 1};      // even/odd pair collapsed in edge columns
  Nat universe = 4096;           // lower bound on materialized elements of C
};

struct ConstructionState {
  Stage stage = 0;
  std::map<Nat, Nat> gamma, epsilon;
  Nat r = 0;
  std::set<Nat> satisfied;
  std::vector<Column> layout;
  std::map<Nat, std::size_t> gamma_changes;  // number of (re)definitions
  std::map<Nat, Stage> last_change;          // last stage gamma_i was (re)defined or dropped

  bool defined(Nat i) const { return gamma.count(i) != 0; }
};

struct StageRecord {
  enum class Action { Initial, DarkActed, CodeDefined, Idle };
  Stage stage = 0;
  Action action = Action::Idle;
  std::optional<Nat> dark;             // j, when Dark_j acted
  std::optional<Nat> defined;          // index whose gamma was set
  std::optional<Edge> witnesses;       // pair collapsed by Dark_j
  std::optional<std::pair<Nat, Nat>> block;
  Nat r = 0;
  std::map<Nat, Nat> gamma, epsilon;
  std::set<Nat> satisfied;
};

struct Trace {
  Nat universe = 0;
  bool finite_mode = true;
  std::vector<StageRecord> stages;
  std::vector<PairBatch> pairs;  // batch of C enumerated at each stage
};

struct RunResult {
  StagedCeer c;
  ConstructionState final_state;
  Trace trace;
};

/// Highest index the finite mode defines for an n-vertex graph: every vertex
/// and every possible binding edge index.
Nat finite_index_limit(Nat n);

/// Stage-by-stage engine. stage_zero() is implied by construction.
class Engine {
 public:
  Engine(GraphInput g, GeneratorFamily family, std::vector<CeSet> ws, Config cfg);

  const ConstructionState& state() const noexcept { return state_; }
  const Trace& trace() const noexcept { return trace_; }
  /// Runs stage state().stage + 1.
  void step();
  bool equivalent(Nat x, Nat y);
  Nat universe() const noexcept { return universe_; }

 private:
  struct Active {
    Nat column;
    Column content;
  };

  void stage_zero();
  void emit(Nat x, Nat y);
  void define(Nat i, Nat column, Stage s);
  void open_column(const Column& col, Stage upto);
  void feed(const Active& a, Stage t);
  void collapse_block(Nat first, Nat last);
  void update_satisfaction(Stage s);
  void record(StageRecord rec);
  void check_layout() const;
  Nat column_bound(Nat n);

  GraphInput graph_;
  GeneratorFamily family_;
  std::vector<CeSet> ws_;
  Config cfg_;
  Nat universe_;
  UnionFind uf_;
  ConstructionState state_;
  Trace trace_;
  PairBatch current_;
  std::vector<Active> active_;
  std::map<Nat, Nat> bound_cache_;
};

/// Dark_j requires attention at stage s+1 (s = state.stage): returns the
/// lexicographically least witness pair x < y.
std::optional<Edge> requires_attention(Nat j, const ConstructionState& state, const CeSet& w,
                                       Stage s_plus_1);

ConstructionState stage_zero(const GraphInput& g, const GeneratorFamily& family, const Config& cfg);

RunResult run(const GraphInput& g, const GeneratorFamily& family, const std::vector<CeSet>& ws,
              Stage stages, const Config& cfg = {});

/// Reads the graph off a stabilized layout. Vertices are 0..n-1; an edge is
/// reported for every stable QuotientEdge column. Throws
/// std::runtime_error when some index <= finite_index_limit(n) is undefined
/// or changed during the final quarter of the run.
FiniteGraph decode_layout_graph(const ConstructionState& final_state, Nat n, Stage stages_run);

struct DarkOutcome {
  enum class Kind { Acted, Passive, WindowNeverHit };
  Nat j = 0;
  Kind kind = Kind::WindowNeverHit;
  std::optional<Stage> stage;  // when acted or first passively satisfied
  std::optional<Edge> witnesses;
};

struct DarkReport {
  std::vector<DarkOutcome> outcomes;
  std::vector<std::string> violations;
  bool ok() const noexcept { return violations.empty(); }
};

/// Replays the trace against the W scripts and the recorded C.
DarkReport verify_dark_satisfaction(const Trace& trace, const std::vector<CeSet>& ws, Nat bound);

std::string to_string(StageRecord::Action a);
std::string to_string(DarkOutcome::Kind k);

}  // namespace ceerlab::construction
