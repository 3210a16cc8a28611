#pragma once

#include <string>
#include <vector>

#include "ceerlab/ceer.hpp"
#include "ceerlab/construction.hpp"
#include "ceerlab/structures.hpp"
#include "json.hpp"

namespace ceerlab::io {

using nlohmann::json;

json read_json_file(const std::string& path);
std::string read_text_file(const std::string& path);
void write_text_file(const std::string& path, const std::string& text);

// Ceer traces: {"kind":"finite","classes":[[...],...]} or
// {"kind":"staged","pairing":"cantor","universe":U,"stages":[[[x,y],...],...]}.
json to_json(const FiniteCeer& c);
json to_json(const StagedCeer& c, Stage stages);
/// Per-stage batches of either form (a finite ceer enumerates at stage 0).
std::vector<PairBatch> ceer_stage_batches(const json& j);
Ceer ceer_from_json(const json& j);

// Graphs: {"kind":"graph","verts":[...],"edges":[[a,b],...]} and DOT.
json to_json(const FiniteGraph& g);
FiniteGraph graph_from_json(const json& j);
std::string to_dot(const FiniteGraph& g, const std::string& name = "G");
FiniteGraph graph_from_dot(const std::string& text);
/// Picks DOT for *.dot / *.gv, JSON otherwise.
FiniteGraph load_graph(const std::string& path);

// Posets: {"kind":"poset","elems":[...],"leq":[[a,b],...]}.
json to_json(const FinitePoset& p);
FinitePoset poset_from_json(const json& j);
std::string to_dot(const FinitePoset& p, const std::string& name = "P");

/// {"ws":[ [ [x, stage] | {"column":n,"pos":x,"stage":s}, ... ], ... ]}
std::vector<CeSet> ws_from_json(const json& j);
json ws_to_json(const std::vector<CeSet>& ws);

json to_json(const construction::Trace& t, const construction::ConstructionState& final_state,
             bool include_pairs);
json to_json(const construction::ConstructionState& s);
json to_json(const construction::Column& c);
construction::Column column_from_json(const json& j);
construction::ConstructionState state_from_json(const json& j);

/// A run as one document: the ceer-trace fields of C at top level and a
/// "construction" block with per-stage records, the final state,
/// "stages_run" and "vertices".
json run_to_json(const construction::RunResult& res, Stage stages, Nat vertices);

}  // namespace ceerlab::io
