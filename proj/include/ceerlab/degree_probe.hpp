#pragma once

#include <array>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "ceerlab/construction.hpp"
#include "ceerlab/structures.hpp"
#include "json.hpp"

namespace ceerlab::probe {

/// Elements whose only strict predecessor is the bottom.
/// Throws std::invalid_argument when P has no bottom.
std::vector<std::size_t> minimal_elements(const FinitePoset& p);

/// a is a strongly minimal cover of the incomparable pair d < e (by index):
/// d, e < a and everything strictly below a is below d or below e.
struct SmcTriple {
  std::size_t cover, d, e;
  auto operator<=>(const SmcTriple&) const = default;
};
std::vector<SmcTriple> smc_pairs(const FinitePoset& p);

/// G_c read off exhaustively. Vertex k of `graph` is poset element
/// element[k]; graph vertex names are the poset names.
struct DecodedGraph {
  FiniteGraph graph;
  std::vector<std::size_t> element;
};
DecodedGraph decode_Gc(const FinitePoset& p, std::size_t c, bool strip_isolated = false);

/// Canonical poset coding a graph: bottom "0", one minimal element per
/// vertex, two incomparable strongly minimal covers "u~v.a", "u~v.b" per
/// edge, and a top "c". Numeric vertex names n become "vn", and a vertex
/// named "c" becomes "vc".
FinitePoset poset_from_graph(const FiniteGraph& g);

/// Ordered pairs (x, y) of poset elements such that G_f contains the
/// label shape x-a-d-y with triangle a-b-c' on fresh vertices and y is the
/// only such partner of x.
std::vector<std::pair<std::size_t, std::size_t>> name_pairs(const FinitePoset& p, std::size_t f);

/// Unordered pairs {p, q} (p < q by index) of light minimal elements over
/// `id` coded below f by an x < f bounding exactly p and q among light
/// minimals, followed by two light cover levels with the top one below f.
std::vector<std::pair<std::size_t, std::size_t>> light_coded_pairs(const FinitePoset& p, std::size_t f,
                                                                   std::size_t id);

// ---- fixtures -------------------------------------------------------------

struct Fixture {
  std::string family;
  FinitePoset poset;
  /// Roles such as "c" (the code), "bottom", "f" (a name), "id".
  std::map<std::string, std::string> designated;
  std::vector<std::string> expect_minimal;
  std::vector<std::array<std::string, 3>> expect_smc;  // cover, d, e
  std::vector<std::pair<std::string, std::string>> expect_edges;
  /// "dark" (name pairs below f), "light" (coded pairs below f over id) or empty.
  std::string label_kind;
  std::vector<std::pair<std::string, std::string>> expect_labels;
};

std::vector<std::string> fixture_families();
/// Throws std::invalid_argument for an unknown family.
Fixture build_fixture(const std::string& family);
/// Poset shadow of a construction layout on n vertices: one minimal element
/// per coding column, and for each edge column both the join and the
/// quotient of the two coded ceers as incomparable covers, under a top "C".
Fixture layout_fixture(const construction::ConstructionState& final_state, Nat n);

struct FixtureCheck {
  std::vector<std::string> lines;       // human-readable, deterministic
  std::vector<std::string> mismatches;  // empty when everything agrees
  bool ok() const noexcept { return mismatches.empty(); }
};
/// Compares expectations, the exhaustive scans and the compiled macros
/// (E on every pair of elements, NameDecodes or LightPairCoded on every
/// pair when the fixture carries labels).
FixtureCheck check_fixture(const Fixture& fx);

nlohmann::json to_json(const Fixture& fx);
Fixture fixture_from_json(const nlohmann::json& j);

}  // namespace ceerlab::probe
