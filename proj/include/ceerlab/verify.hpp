#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "ceerlab/ceer.hpp"
#include "ceerlab/construction.hpp"
#include "ceerlab/structures.hpp"

namespace ceerlab::verify {

// ---- kernel facts on finite ceers -------------------------------------------

/// Every finite ceer whose period is at most max_period and which has at
/// most max_classes classes, ordered by period and then by label string.
std::vector<FiniteCeer> all_finite_ceers(Nat max_period, std::size_t max_classes);

struct KernelFactsConfig {
  Nat max_period = 10;
  std::size_t max_classes = 5;
  Nat max_k = 3;
  /// Two-ceer facts run over all pairs with both periods at most this.
  Nat exhaustive_period = 5;
  /// Beyond that, each ceer meets this many seeded partners.
  std::size_t partners = 4;
  std::uint64_t seed = 1;
};

struct FactTally {
  std::string fact;
  std::uint64_t instances = 0;
  std::vector<std::string> counterexamples;  // first few only
  std::uint64_t failures = 0;
};

/// Cancellation, the omitted-classes law, the restriction law and the
/// even/odd decomposition, each checked with brute_force_reduces.
std::vector<FactTally> kernel_facts(const KernelFactsConfig& cfg);

// ---- construction scenarios --------------------------------------------------

struct NamedGraph {
  std::string name;
  FiniteGraph graph;
};
/// Empty graph on 3 vertices, P3, C4, K4 and the six-vertex label graph.
std::vector<NamedGraph> acceptance_graphs();

/// Scripted W sets for a full-mode run: a few pairs in columns below 60
/// enumerated before stage 150, so every run settles well before stage 500.
std::vector<CeSet> scripted_ws(std::uint64_t seed, std::size_t count);

struct DarkScenario {
  std::string name;
  FiniteGraph graph;
  std::string family;
  std::vector<CeSet> ws;
  Stage stages = 300;
};
/// Twenty scenarios mixing fresh-column pairs, restrained columns, passive
/// hits inside coding columns and lone elements.
std::vector<DarkScenario> dark_scenarios(std::uint64_t seed);

/// gamma_i (re)definitions counted from the per-stage tables.
std::map<Nat, std::size_t> gamma_change_counts(const construction::Trace& t);
/// For each i < limit, the number of Dark_j actions with j < i.
std::map<Nat, std::size_t> actions_below(const construction::Trace& t, Nat limit);

// ---- suites -----------------------------------------------------------------

struct Check {
  std::string name;
  bool pass = false;
  std::string detail;
};

struct Report {
  std::string suite;
  std::uint64_t seed = 0;
  std::vector<Check> checks;
  bool ok() const;
  /// One line per check plus a header and a summary; contains no timings.
  std::string text() const;
};

std::vector<std::string> suite_names();  // kernel, construction, interpretation, probe, all
/// Throws std::invalid_argument for an unknown suite.
Report run_suite(const std::string& suite, std::uint64_t seed);

}  // namespace ceerlab::verify
