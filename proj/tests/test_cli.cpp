#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <sys/wait.h>

#include "json.hpp"

namespace fs = std::filesystem;

namespace {

const fs::path& dir() {
  static const fs::path d = [] {
    auto p = fs::temp_directory_path() / "ceerlab-cli-test";
    fs::create_directories(p);
    return p;
  }();
  return d;
}

int run(const std::string& args) {
  const std::string cmd = std::string("\"") + CEERLAB_CLI + "\" " + args + " >\"" + (dir() / "stdout").string() +
                          "\" 2>\"" + (dir() / "stderr").string() + "\"";
  const int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::string write(const std::string& name, const std::string& text) {
  auto p = dir() / name;
  std::ofstream(p) << text;
  return p.string();
}

}  // namespace

TEST_CASE("construct and decode") {
  auto g = write("p3.json", R"({"kind":"graph","verts":[0,1,2],"edges":[[0,1],[1,2]]})");
  auto t = (dir() / "t.json").string();
  CHECK(run("construct --graph " + g + " --stages 500 --out " + t) == 0);
  auto j = nlohmann::json::parse(slurp(t));
  CHECK(j["kind"] == "staged");
  CHECK(j["stages"].size() == 500);
  CHECK(j["construction"]["records"].size() == 500);
  CHECK(run("decode --trace " + t) == 0);
  auto d = nlohmann::json::parse(slurp(dir() / "stdout"));
  CHECK(d["edges"].size() == 2);

  auto dot = write("p3.dot", "graph G { 0 -- 1; 1 -- 2; }");
  CHECK(run("construct --graph " + dot + " --stages 8 --out " + t) == 0);
  CHECK(run("decode --trace " + t) == 1);  // not stable yet

  auto ws = write("ws.json", R"({"ws":[[[100,20],[120,20]]]})");
  CHECK(run("construct --graph " + g + " --stages 300 --full --ws " + ws + " --out " + t) == 0);
  auto full = nlohmann::json::parse(slurp(t));
  bool acted = false;
  for (const auto& r : full["construction"]["records"]) acted = acted || r.contains("dark");
  CHECK(acted);
}

TEST_CASE("formulas, fixtures and probes") {
  CHECK(run("translate --from arith --to graph \"forall x. x + x = x\"") == 0);
  CHECK(slurp(dir() / "stdout").find("forall") != std::string::npos);
  auto gj = (dir() / "g.json").string();
  CHECK(run("gadget --n 3 --out " + gj) == 0);
  CHECK(run("check --structure " + gj + " --formula \"exists x. exists y. E(x,y)\" --expect true") == 0);
  CHECK(run("check --structure " + gj + " --formula \"E(x,y)\" --assign x=e0 --assign y=e1 --expect true") == 1);
  auto fx = (dir() / "dc.json").string();
  CHECK(run("fixture --family double-cover --out " + fx) == 0);
  CHECK(run("probe --poset " + fx + " --op decode") == 0);
  CHECK(slurp(dir() / "stdout").find("\"r1\",\"r2\"") != std::string::npos);
  CHECK(run("probe --poset " + fx + " --op check") == 0);
  CHECK(run("export-dot --input " + fx) == 0);
  CHECK(slurp(dir() / "stdout").rfind("digraph", 0) == 0);
  CHECK(run("name --pair x,y --universe 4 --out " + (dir() / "n.json").string()) == 0);
  auto n = nlohmann::json::parse(slurp(dir() / "n.json"));
  CHECK(n["label_metadata"]["summands"].size() == 12);
}

TEST_CASE("verify prints its seed") {
  CHECK(run("verify --suite probe --seed 77") == 0);
  CHECK(slurp(dir() / "stdout").rfind("ceerlab verify suite=probe seed=77\n", 0) == 0);
}

TEST_CASE("usage errors exit with 2") {
  CHECK(run("--no-such-flag") == 2);
  CHECK(run("construct --graph missing.json") == 2);
  CHECK(run("verify --suite nope") == 2);
  CHECK(run("fixture --family nope") == 2);
  auto g = write("bad.json", "{not json");
  CHECK(run("check --structure " + g + " --formula \"x = x\"") == 2);
  CHECK(run("") == 2);
}
