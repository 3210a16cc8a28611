#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

namespace ceerlab {

/// Finite simple graph on vertices 0..n-1 with optional display names.
class FiniteGraph {
 public:
  FiniteGraph() = default;
  explicit FiniteGraph(std::size_t n);

  std::size_t add_vertex(std::string name = {});
  /// Symmetric; loops are rejected with std::invalid_argument.
  void add_edge(std::size_t a, std::size_t b);

  std::size_t size() const noexcept { return adj_.size(); }
  bool has_edge(std::size_t a, std::size_t b) const;
  const std::vector<std::size_t>& neighbours(std::size_t v) const { return adj_[v]; }
  std::size_t degree(std::size_t v) const { return adj_[v].size(); }
  /// Each edge once, as (min, max), sorted.
  std::vector<std::pair<std::size_t, std::size_t>> edges() const;
  std::size_t edge_count() const;

  const std::string& name(std::size_t v) const { return names_[v]; }
  std::optional<std::size_t> find(const std::string& name) const;

  bool operator==(const FiniteGraph& o) const { return adj_ == o.adj_; }

 private:
  std::vector<std::vector<std::size_t>> adj_;  // sorted neighbour lists
  std::vector<std::string> names_;
  std::unordered_map<std::string, std::size_t> by_name_;
};

/// Finite partial order. Relations are added freely and then closed.
class FinitePoset {
 public:
  FinitePoset() = default;

  std::size_t add_element(std::string name = {});
  /// Records a <= b; call close() before querying.
  void add_leq(std::size_t a, std::size_t b);
  /// Reflexive-transitive closure; throws std::invalid_argument when the
  /// result is not antisymmetric.
  void close();

  std::size_t size() const noexcept { return names_.size(); }
  bool leq(std::size_t a, std::size_t b) const { return leq_[a * n_ + b]; }
  bool lt(std::size_t a, std::size_t b) const { return a != b && leq(a, b); }
  bool comparable(std::size_t a, std::size_t b) const { return leq(a, b) || leq(b, a); }
  const std::vector<std::size_t>& down(std::size_t a) const { return down_[a]; }
  const std::vector<std::size_t>& up(std::size_t a) const { return up_[a]; }
  std::optional<std::size_t> bottom() const;
  std::optional<std::size_t> top() const;

  const std::string& name(std::size_t v) const { return names_[v]; }
  std::optional<std::size_t> find(const std::string& name) const;
  std::size_t at(const std::string& name) const;

  /// Hasse-diagram pairs (a covered by b).
  std::vector<std::pair<std::size_t, std::size_t>> covers() const;

 private:
  std::vector<std::string> names_;
  std::unordered_map<std::string, std::size_t> by_name_;
  std::vector<std::pair<std::size_t, std::size_t>> raw_;
  std::size_t n_ = 0;
  std::vector<char> leq_;
  std::vector<std::vector<std::size_t>> down_, up_;
};

}  // namespace ceerlab
