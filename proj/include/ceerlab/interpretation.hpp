#pragma once

#include <string>
#include <vector>

#include "ceerlab/formula.hpp"
#include "ceerlab/pairing.hpp"
#include "ceerlab/structures.hpp"

namespace ceerlab::interp {

using logic::F;

/// A named formula with formal parameters. Applying it renames the
/// parameters (capture-avoiding), so bound names inside never clash.
struct Macro {
  std::string name;
  std::vector<std::string> params;
  F body;

  F operator()(const std::vector<std::string>& args) const;
};

// ---- the arithmetic-in-graph gadget --------------------------------------

/// Fragment of the coding graph for {0..N}: element vertices e0..eN, one
/// hub per true triple a+b=c or a*b=c with c <= N, pendant leaves (two on a
/// plus-hub, three on a times-hub), and internal paths of lengths 2, 3, 4
/// from each hub to its first, second and third argument.
struct GadgetGraph {
  struct Hub {
    char op;  // '+' or '*'
    Nat a, b, c;
    std::size_t vertex;
  };
  Nat n_max = 0;
  FiniteGraph graph;
  std::vector<std::size_t> element;  // element[k] is e_k
  std::vector<Hub> hubs;
};

/// Throws std::invalid_argument for N < 1.
GadgetGraph build_gadget_graph(Nat n_max);

/// Graph-signature formulas recovering the arithmetic from the gadget.
struct GraphFormulas {
  Macro leaf, hub, mid, universe, plus_hub, times_hub;
  Macro arg1, arg2, arg3;
  Macro phi_plus, phi_times;
  Macro zero, le, succ;
};
GraphFormulas defining_formulas();

// ---- arithmetic sugar -----------------------------------------------------

/// Relational arithmetic definitions over + and x only.
struct ArithFormulas {
  Macro zero, one, le, succ;
};
ArithFormulas arith_formulas();
/// x is the numeral k (built from zero, one and repeated +1).
F arith_numeral(Nat k, const std::string& x);
/// forall x (x <= k -> body) and exists x (x <= k & body), with k a numeral.
F bounded_forall(const std::string& x, Nat k, F body);
F bounded_exists(const std::string& x, Nat k, F body);

// ---- a corpus of bounded sentences -----------------------------------------

/// A sentence written as "Q v k, ... : matrix". Q is A (for all v <= k),
/// E (exists v <= k) or N (v is the numeral k); the matrix uses the
/// formula grammar. Unbounded quantifiers in a matrix are only used where a
/// true atom already bounds the variable.
struct CorpusSentence {
  std::string text;
  F sentence;
  Nat bound = 0;  // largest k in the prefix
};
/// Throws std::invalid_argument on malformed text.
CorpusSentence corpus_sentence(const std::string& text);
/// Fixed list of true and false sentences with bounds <= 3.
std::vector<CorpusSentence> arithmetic_corpus();
/// Fragment size used for the corpus: 2 * B^2 for the largest bound B.
Nat corpus_fragment(const std::vector<CorpusSentence>& corpus);

// ---- translations ---------------------------------------------------------

/// sigma -> sigma°: atoms to phi_+/phi_x, quantifiers relativized to U.
/// Throws std::invalid_argument on a non-arithmetic atom.
F arith_to_graph(const F& sigma);

enum class VertexMode { V, NI };

/// How graph vertices and edges are read off a poset element w. The dark
/// reading uses minimal elements and pairs of strongly minimal covers; the
/// light reading works above the degree of Id, passed as variable `id`.
struct Coding {
  VertexMode mode = VertexMode::NI;
  bool light = false;
  std::string id = "i";
};

/// sigma -> sigma~(w): quantifiers relativized to V(., w) or NI(., w),
/// edges replaced by E(., ., w). Free variables of sigma stay free and
/// unguarded. Throws std::invalid_argument on a non-graph atom or when
/// sigma already uses the name w (or the Id variable in light mode).
F graph_to_poset(const F& sigma, const std::string& w = "w", const Coding& coding = {});
/// sigma~(c) with each free variable v of sigma guarded by NI(v, c) (or
/// V): the relation sigma defines inside G_c.
F at_code(const F& sigma, const std::string& c, const Coding& coding = {});

// ---- poset macros ---------------------------------------------------------

struct PosetMacros {
  Macro least;      // (b): b is the least element
  Macro minimal;    // (x): above the least element with nothing in between
  Macro smc;        // (a, d, e): a strongly minimal cover of incomparable d, e
  Macro vertex;     // V(x, c)
  Macro edge;       // E(x, y, c): two incomparable such covers below c
  Macro ni;         // NI(x, c)
  // light variants take the degree of Id as an explicit parameter i
  Macro light_minimal;  // (x, i)
  Macro light_smc;      // (a, d, e, i)
  Macro light_vertex;   // (x, c, i)
  Macro light_edge;     // (x, y, c, i)
  Macro light_ni;       // (x, c, i)
  Macro light_cover;    // (y, x, i): [i, y) = [i, x]
  /// (f, p, q, i): p, q light minimal below f, some x < f bounds exactly
  /// p and q among light minimals, x has a light cover y, y has a light
  /// cover z <= f.
  Macro light_pair_coded;
};
PosetMacros poset_macros();

// ---- Robinson's Q ---------------------------------------------------------

struct Axiom {
  std::string name;
  F formula;  // arithmetic sentence
};
/// Relational form over + and x with zero and successor defined. The
/// bounded list drops the totality axioms (no finite model satisfies them).
std::vector<Axiom> q_axioms(bool bounded);
/// Conjunction of the translated axioms: a poset formula free only in w.
F good_code_formula(bool bounded, const std::string& w = "w", const Coding& coding = {});

// ---- names, labels and the copy of N --------------------------------------

struct NameFormulas {
  Macro interval;      // (x, a, b, c): x in [a, b] of U^c
  Macro graph_label;   // (f, x, y): a graph-label for (x, y) inside G_f
  Macro name_decodes;  // (f, x, y): the label for x exists and y is unique
  Macro sim;           // (c, d, c2, d2)
  Macro good;          // (c)
  Macro n_member;      // (c, d)
  Macro n_plus;        // (c1, d1, c2, d2, c3, d3)
  Macro n_times;       // (c1, d1, c2, d2, c3, d3)
  // light side, with the degree of Id as parameter i
  Macro light_label_maps;  // (f, g, c, c2, a, a2, i): the label (f, g) sends a to a2
  Macro light_sim;         // (c, d, c2, d2, i)
};
NameFormulas name_formulas();

}  // namespace ceerlab::interp
