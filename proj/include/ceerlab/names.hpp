#pragma once

#include <array>
#include <functional>
#include <string>
#include <vector>

#include "ceerlab/ceer.hpp"
#include "ceerlab/structures.hpp"
#include "json.hpp"

namespace ceerlab::names {

/// A ceer together with an identifier. Identity of degrees is tracked only
/// through these ids: equal ids mean the same vertex of the label graph.
struct NamedCeer {
  std::string id;
  StagedCeer ceer;
};

/// One direct summand of a name. Vertex summands carry one ceer id, edge
/// summands are (U (+) V)/(p, q) for the two ids u, v.
struct Summand {
  enum class Kind { Vertex, Edge };
  Kind kind = Kind::Vertex;
  std::string u, v;  // v empty for vertex summands
  std::size_t pair = 0;  // index of the pair of F this summand belongs to
};

struct ZResult {
  StagedCeer ceer;
  std::vector<Summand> summands;  // in join order
};

/// The twelve-summand join for one pair: x, a, d, y, b, c followed by the
/// quotiented joins on the edges x-a, a-d, d-y, a-b, b-c, a-c. `fresh`
/// supplies a, b, c, d in that order. The quotient pair names elements of
/// each two-part join (even from the first part, odd from the second).
/// Throws std::invalid_argument when fewer than four fresh ceers are given,
/// the ids are not distinct or the pair has the wrong parities.
ZResult build_Z(const NamedCeer& x, const NamedCeer& y, const std::vector<NamedCeer>& fresh,
                Edge quotient_pair = {0, 1});

struct PairSet {
  std::vector<std::pair<NamedCeer, NamedCeer>> pairs;
};

/// Returns the k-th fresh ceer; ids must never repeat.
using FreshSupply = std::function<NamedCeer(std::size_t k)>;
/// Identity ceers on `universe` named "g0", "g1", ...
FreshSupply default_fresh_supply(Nat universe);

struct NameResult {
  StagedCeer ceer;
  std::vector<Summand> summands;  // flattened, pair by pair
  /// gadget[k] = ids of a, b, c, d used for pair k
  std::vector<std::array<std::string, 4>> gadget;
};

/// Uniform join of Z over all pairs, drawing four fresh ceers per pair.
/// Throws std::invalid_argument for an empty F or when a fresh id collides
/// with an id in F or an earlier fresh id.
NameResult build_name(const PairSet& f, const FreshSupply& fresh, Edge quotient_pair = {0, 1});

/// The graph a name for F must realize: per pair the path x-a-d-y and the
/// triangle a-b-c on gadget vertices named by `gadget` (default "a#k",
/// "b#k", "c#k", "d#k"); x and y vertices are shared by id. Vertices are
/// numbered in the order x, a, d, y, b, c per pair, skipping repeats.
FiniteGraph expected_label_graph(const PairSet& f,
                                 const std::vector<std::array<std::string, 4>>& gadget = {});

/// Reads the graph back off the summand metadata alone.
FiniteGraph decode_label_metadata(const std::vector<Summand>& summands);

/// {"pairs":[{"x":..,"y":..,"gadget":{"a":..,..}}],"summands":[...]}.
nlohmann::json label_metadata(const PairSet& f, const NameResult& name);

}  // namespace ceerlab::names
