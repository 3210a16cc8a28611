#include "ceerlab/json_io.hpp"

#include <fstream>
#include <map>
#include <set>
#include <regex>
#include <sstream>
#include <stdexcept>

namespace ceerlab::io {

json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path);
  try {
    return json::parse(in);
  } catch (const json::parse_error& e) {
    throw std::runtime_error(path + ": " + e.what());
  }
}

std::string read_text_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_text_file(const std::string& path, const std::string& text) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path);
  out << text;
}

// ---- ceers --------------------------------------------------------------

json to_json(const FiniteCeer& c) {
  json j;
  j["kind"] = "finite";
  j["classes"] = c.window(c.period());
  return j;
}

json to_json(const StagedCeer& c, Stage stages) {
  json j;
  j["kind"] = "staged";
  j["pairing"] = "cantor";
  j["universe"] = c.universe_bound();
  json st = json::array();
  for (Stage s = 0; s < stages; ++s) {
    json b = json::array();
    for (auto [x, y] : c.batch(s)) b.push_back({x, y});
    st.push_back(std::move(b));
  }
  j["stages"] = std::move(st);
  return j;
}

std::vector<PairBatch> ceer_stage_batches(const json& j) {
  const auto kind = j.at("kind").get<std::string>();
  if (kind == "finite") {
    PairBatch b;
    for (const auto& cl : j.at("classes")) {
      auto v = cl.get<std::vector<Nat>>();
      for (std::size_t k = 1; k < v.size(); ++k) b.emplace_back(v[0], v[k]);
    }
    return {b};
  }
  if (kind == "staged") {
    if (j.contains("pairing") && j["pairing"] != "cantor")
      throw std::invalid_argument("unsupported pairing " + j["pairing"].dump());
    std::vector<PairBatch> out;
    for (const auto& st : j.at("stages")) {
      PairBatch b;
      for (const auto& p : st) b.emplace_back(p.at(0).get<Nat>(), p.at(1).get<Nat>());
      out.push_back(std::move(b));
    }
    return out;
  }
  throw std::invalid_argument("unknown ceer kind " + kind);
}

Ceer ceer_from_json(const json& j) {
  const auto kind = j.at("kind").get<std::string>();
  if (kind == "finite") return FiniteCeer::from_classes(j.at("classes").get<std::vector<std::vector<Nat>>>());
  auto batches = ceer_stage_batches(j);
  Nat u = 0;
  if (j.contains("universe")) {
    u = j["universe"].get<Nat>();
  } else {
    for (const auto& b : batches)
      for (auto [x, y] : b) u = std::max({u, x + 1, y + 1});
  }
  if (u == 0) throw std::invalid_argument("staged ceer needs a universe");
  return recorded_ceer(u, std::move(batches));
}

// ---- graphs -------------------------------------------------------------

namespace {
std::string key_of(const json& v) { return v.is_string() ? v.get<std::string>() : v.dump(); }
}  // namespace

json to_json(const FiniteGraph& g) {
  json j;
  j["kind"] = "graph";
  json verts = json::array();
  for (std::size_t v = 0; v < g.size(); ++v) verts.push_back(g.name(v));
  j["verts"] = verts;
  json edges = json::array();
  for (auto [a, b] : g.edges()) edges.push_back({g.name(a), g.name(b)});
  j["edges"] = edges;
  return j;
}

FiniteGraph graph_from_json(const json& j) {
  if (j.value("kind", "graph") != "graph") throw std::invalid_argument("not a graph document");
  FiniteGraph g;
  for (const auto& v : j.at("verts")) g.add_vertex(key_of(v));
  for (const auto& e : j.at("edges")) {
    auto a = g.find(key_of(e.at(0))), b = g.find(key_of(e.at(1)));
    if (!a || !b) throw std::invalid_argument("edge mentions an unknown vertex: " + e.dump());
    g.add_edge(*a, *b);
  }
  return g;
}

std::string to_dot(const FiniteGraph& g, const std::string& name) {
  std::ostringstream os;
  os << "graph " << name << " {\n";
  for (std::size_t v = 0; v < g.size(); ++v) os << "  \"" << g.name(v) << "\";\n";
  for (auto [a, b] : g.edges()) os << "  \"" << g.name(a) << "\" -- \"" << g.name(b) << "\";\n";
  os << "}\n";
  return os.str();
}

FiniteGraph graph_from_dot(const std::string& text) {
  // Enough DOT for what to_dot writes and hand-written small files:
  // `a;`, `a -- b;`, `a -- b -- c;`, quoted or bare identifiers, // comments.
  FiniteGraph g;
  auto vertex = [&g](const std::string& id) {
    if (auto v = g.find(id)) return *v;
    return g.add_vertex(id);
  };
  const auto open = text.find('{'), close = text.rfind('}');
  if (open == std::string::npos || close == std::string::npos || close < open)
    throw std::invalid_argument("DOT input needs a { ... } body");
  std::string body = text.substr(open + 1, close - open - 1);
  body = std::regex_replace(body, std::regex("//[^\n]*"), "");
  std::stringstream stmts(body);
  std::string stmt;
  const std::regex id_re("\"([^\"]*)\"|([A-Za-z0-9_.]+)");
  while (std::getline(stmts, stmt, ';')) {
    if (stmt.find('[') != std::string::npos) stmt = stmt.substr(0, stmt.find('['));
    std::vector<std::string> ids;
    std::string rest = stmt;
    std::size_t parts = 0;
    std::size_t pos = 0;
    while (true) {
      auto arrow = rest.find("--", pos);
      std::string piece = rest.substr(pos, arrow == std::string::npos ? std::string::npos : arrow - pos);
      std::smatch m;
      if (std::regex_search(piece, m, id_re)) ids.push_back(m[1].matched ? m[1].str() : m[2].str());
      ++parts;
      if (arrow == std::string::npos) break;
      pos = arrow + 2;
    }
    if (ids.empty()) continue;
    if (ids.size() != parts) throw std::invalid_argument("cannot parse DOT statement: " + stmt);
    if (ids.size() == 1 && (ids[0] == "graph" || ids[0] == "node" || ids[0] == "edge")) continue;
    std::size_t prev = vertex(ids[0]);
    for (std::size_t k = 1; k < ids.size(); ++k) {
      std::size_t cur = vertex(ids[k]);
      g.add_edge(prev, cur);
      prev = cur;
    }
  }
  return g;
}

FiniteGraph load_graph(const std::string& path) {
  auto ends_with = [&path](const std::string& suf) {
    return path.size() >= suf.size() && path.compare(path.size() - suf.size(), suf.size(), suf) == 0;
  };
  if (ends_with(".dot") || ends_with(".gv")) return graph_from_dot(read_text_file(path));
  return graph_from_json(read_json_file(path));
}

// ---- posets -------------------------------------------------------------

json to_json(const FinitePoset& p) {
  json j;
  j["kind"] = "poset";
  json elems = json::array();
  for (std::size_t v = 0; v < p.size(); ++v) elems.push_back(p.name(v));
  j["elems"] = elems;
  json leq = json::array();
  for (auto [a, b] : p.covers()) leq.push_back({p.name(a), p.name(b)});
  j["leq"] = leq;
  return j;
}

FinitePoset poset_from_json(const json& j) {
  if (j.value("kind", "poset") != "poset") throw std::invalid_argument("not a poset document");
  FinitePoset p;
  for (const auto& e : j.at("elems")) p.add_element(key_of(e));
  for (const auto& r : j.at("leq")) {
    auto a = p.find(key_of(r.at(0))), b = p.find(key_of(r.at(1)));
    if (!a || !b) throw std::invalid_argument("order pair mentions an unknown element: " + r.dump());
    p.add_leq(*a, *b);
  }
  p.close();
  return p;
}

std::string to_dot(const FinitePoset& p, const std::string& name) {
  std::ostringstream os;
  os << "digraph " << name << " {\n  rankdir=BT;\n";
  for (std::size_t v = 0; v < p.size(); ++v) os << "  \"" << p.name(v) << "\";\n";
  for (auto [a, b] : p.covers()) os << "  \"" << p.name(a) << "\" -> \"" << p.name(b) << "\";\n";
  os << "}\n";
  return os.str();
}

// ---- W scripts ----------------------------------------------------------

std::vector<CeSet> ws_from_json(const json& j) {
  std::vector<CeSet> out;
  for (const auto& w : j.at("ws")) {
    std::vector<std::pair<Nat, Stage>> events;
    for (const auto& ev : w) {
      if (ev.is_array()) {
        events.emplace_back(ev.at(0).get<Nat>(), ev.at(1).get<Stage>());
      } else {
        events.emplace_back(pair(ev.at("column").get<Nat>(), ev.at("pos").get<Nat>()), ev.at("stage").get<Stage>());
      }
    }
    out.push_back(CeSet::scripted(std::move(events)));
  }
  return out;
}

json ws_to_json(const std::vector<CeSet>& ws) {
  json arr = json::array();
  for (const auto& w : ws) {
    json ev = json::array();
    for (auto [x, s] : w.events()) ev.push_back({x, s});
    arr.push_back(ev);
  }
  return json{{"ws", arr}};
}

// ---- construction traces ------------------------------------------------

json to_json(const construction::Column& c) {
  using K = construction::Column::Kind;
  json j;
  switch (c.kind) {
    case K::Coding:
      j = {{"kind", "coding"}, {"column", c.first}, {"index", c.index}, {"content", "R_" + std::to_string(c.index)}};
      break;
    case K::QuotientEdge:
      j = {{"kind", "quotient-edge"}, {"column", c.first}, {"index", c.index}, {"a", c.a}, {"b", c.b}};
      break;
    case K::Block:
      j = {{"kind", "block"}, {"first", c.first}, {"last", c.last}};
      break;
  }
  return j;
}

namespace {
json param_table(const std::map<Nat, Nat>& m) {
  json j = json::object();
  for (auto [k, v] : m) j[std::to_string(k)] = v;
  return j;
}
}  // namespace

json to_json(const construction::ConstructionState& s) {
  json j;
  j["stage"] = s.stage;
  j["r"] = s.r;
  j["gamma"] = param_table(s.gamma);
  j["epsilon"] = param_table(s.epsilon);
  j["satisfied"] = s.satisfied;
  std::vector<construction::Column> cols = s.layout;
  std::sort(cols.begin(), cols.end(), [](const auto& a, const auto& b) { return a.first < b.first; });
  json layout = json::array();
  for (const auto& c : cols) layout.push_back(to_json(c));
  j["layout"] = layout;
  json changes = json::object();
  for (auto [i, n] : s.gamma_changes) changes[std::to_string(i)] = n;
  j["gamma_changes"] = changes;
  j["last_change"] = param_table(s.last_change);
  return j;
}

namespace {
std::map<Nat, Nat> read_table(const json& j) {
  std::map<Nat, Nat> m;
  for (const auto& [k, v] : j.items()) m[std::stoull(k)] = v.get<Nat>();
  return m;
}
}  // namespace

construction::Column column_from_json(const json& j) {
  using K = construction::Column::Kind;
  construction::Column c;
  const auto kind = j.at("kind").get<std::string>();
  if (kind == "coding" || kind == "quotient-edge") {
    c.kind = kind == "coding" ? K::Coding : K::QuotientEdge;
    c.first = c.last = j.at("column").get<Nat>();
    c.index = j.at("index").get<Nat>();
    if (c.kind == K::QuotientEdge) {
      c.a = j.at("a").get<Nat>();
      c.b = j.at("b").get<Nat>();
    }
  } else if (kind == "block") {
    c.kind = K::Block;
    c.first = j.at("first").get<Nat>();
    c.last = j.at("last").get<Nat>();
  } else {
    throw std::invalid_argument("unknown column kind " + kind);
  }
  return c;
}

construction::ConstructionState state_from_json(const json& j) {
  construction::ConstructionState s;
  s.stage = j.at("stage").get<Stage>();
  s.r = j.at("r").get<Nat>();
  s.gamma = read_table(j.at("gamma"));
  s.epsilon = read_table(j.at("epsilon"));
  s.satisfied = j.at("satisfied").get<std::set<Nat>>();
  for (const auto& c : j.at("layout")) s.layout.push_back(column_from_json(c));
  for (const auto& [i, n] : read_table(j.value("gamma_changes", json::object()))) s.gamma_changes[i] = n;
  s.last_change = read_table(j.value("last_change", json::object()));
  return s;
}

json to_json(const construction::Trace& t, const construction::ConstructionState& final_state,
             bool include_pairs) {
  json j;
  j["universe"] = t.universe;
  j["finite_mode"] = t.finite_mode;
  json stages = json::array();
  for (std::size_t k = 0; k < t.stages.size(); ++k) {
    const auto& r = t.stages[k];
    json s;
    s["stage"] = r.stage;
    s["action"] = construction::to_string(r.action);
    if (r.dark) s["dark"] = *r.dark;
    if (r.defined) s["defined"] = *r.defined;
    if (r.witnesses) s["witnesses"] = {r.witnesses->first, r.witnesses->second};
    if (r.block) s["block"] = {r.block->first, r.block->second};
    s["r"] = r.r;
    s["gamma"] = param_table(r.gamma);
    s["epsilon"] = param_table(r.epsilon);
    s["satisfied"] = r.satisfied;
    if (include_pairs) {
      json b = json::array();
      for (auto [x, y] : t.pairs[k]) b.push_back({x, y});
      s["pairs"] = b;
    }
    stages.push_back(std::move(s));
  }
  j["stages"] = stages;
  j["final"] = to_json(final_state);
  return j;
}

json run_to_json(const construction::RunResult& res, Stage stages, Nat vertices) {
  json j;
  j["kind"] = "staged";
  j["pairing"] = "cantor";
  j["universe"] = res.trace.universe;
  json batches = json::array();
  for (const auto& b : res.trace.pairs) {
    json bj = json::array();
    for (auto [x, y] : b) bj.push_back({x, y});
    batches.push_back(std::move(bj));
  }
  j["stages"] = std::move(batches);
  auto c = to_json(res.trace, res.final_state, false);
  c["records"] = std::move(c["stages"]);
  c.erase("stages");
  c["stages_run"] = stages;
  c["vertices"] = vertices;
  j["construction"] = std::move(c);
  return j;
}

}  // namespace ceerlab::io
