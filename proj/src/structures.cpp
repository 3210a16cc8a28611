#include "ceerlab/structures.hpp"

#include <algorithm>
#include <stdexcept>

namespace ceerlab {

FiniteGraph::FiniteGraph(std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) add_vertex();
}

std::size_t FiniteGraph::add_vertex(std::string name) {
  const std::size_t id = adj_.size();
  if (name.empty()) name = std::to_string(id);
  if (!by_name_.emplace(name, id).second) throw std::invalid_argument("duplicate vertex name " + name);
  adj_.emplace_back();
  names_.push_back(std::move(name));
  return id;
}

void FiniteGraph::add_edge(std::size_t a, std::size_t b) {
  if (a >= size() || b >= size()) throw std::out_of_range("edge endpoint out of range");
  if (a == b) throw std::invalid_argument("graph must be irreflexive (loop at " + names_[a] + ")");
  auto ins = [](std::vector<std::size_t>& v, std::size_t x) {
    auto it = std::lower_bound(v.begin(), v.end(), x);
    if (it == v.end() || *it != x) v.insert(it, x);
  };
  ins(adj_[a], b);
  ins(adj_[b], a);
}

bool FiniteGraph::has_edge(std::size_t a, std::size_t b) const {
  if (a >= size() || b >= size()) return false;
  return std::binary_search(adj_[a].begin(), adj_[a].end(), b);
}

std::vector<std::pair<std::size_t, std::size_t>> FiniteGraph::edges() const {
  std::vector<std::pair<std::size_t, std::size_t>> out;
  for (std::size_t a = 0; a < size(); ++a)
    for (std::size_t b : adj_[a])
      if (a < b) out.emplace_back(a, b);
  return out;
}

std::size_t FiniteGraph::edge_count() const {
  std::size_t d = 0;
  for (const auto& n : adj_) d += n.size();
  return d / 2;
}

std::optional<std::size_t> FiniteGraph::find(const std::string& name) const {
  auto it = by_name_.find(name);
  if (it == by_name_.end()) return std::nullopt;
  return it->second;
}

std::size_t FinitePoset::add_element(std::string name) {
  const std::size_t id = names_.size();
  if (name.empty()) name = std::to_string(id);
  if (!by_name_.emplace(name, id).second) throw std::invalid_argument("duplicate element name " + name);
  names_.push_back(std::move(name));
  return id;
}

void FinitePoset::add_leq(std::size_t a, std::size_t b) {
  if (a >= size() || b >= size()) throw std::out_of_range("order pair out of range");
  raw_.emplace_back(a, b);
}

void FinitePoset::close() {
  n_ = names_.size();
  leq_.assign(n_ * n_, 0);
  for (std::size_t i = 0; i < n_; ++i) leq_[i * n_ + i] = 1;
  for (auto [a, b] : raw_) leq_[a * n_ + b] = 1;
  for (std::size_t k = 0; k < n_; ++k)
    for (std::size_t i = 0; i < n_; ++i)
      if (leq_[i * n_ + k])
        for (std::size_t j = 0; j < n_; ++j)
          if (leq_[k * n_ + j]) leq_[i * n_ + j] = 1;
  for (std::size_t i = 0; i < n_; ++i)
    for (std::size_t j = i + 1; j < n_; ++j)
      if (leq_[i * n_ + j] && leq_[j * n_ + i])
        throw std::invalid_argument("order is not antisymmetric: " + names_[i] + " and " + names_[j]);
  down_.assign(n_, {});
  up_.assign(n_, {});
  for (std::size_t i = 0; i < n_; ++i)
    for (std::size_t j = 0; j < n_; ++j)
      if (leq_[i * n_ + j]) {
        up_[i].push_back(j);
        down_[j].push_back(i);
      }
}

std::optional<std::size_t> FinitePoset::bottom() const {
  for (std::size_t b = 0; b < n_; ++b)
    if (up_[b].size() == n_) return b;
  return std::nullopt;
}

std::optional<std::size_t> FinitePoset::top() const {
  for (std::size_t t = 0; t < n_; ++t)
    if (down_[t].size() == n_) return t;
  return std::nullopt;
}

std::optional<std::size_t> FinitePoset::find(const std::string& name) const {
  auto it = by_name_.find(name);
  if (it == by_name_.end()) return std::nullopt;
  return it->second;
}

std::size_t FinitePoset::at(const std::string& name) const {
  auto v = find(name);
  if (!v) throw std::out_of_range("no element named " + name);
  return *v;
}

std::vector<std::pair<std::size_t, std::size_t>> FinitePoset::covers() const {
  std::vector<std::pair<std::size_t, std::size_t>> out;
  for (std::size_t a = 0; a < n_; ++a)
    for (std::size_t b : up_[a]) {
      if (a == b) continue;
      bool direct = true;
      for (std::size_t z : up_[a])
        if (z != a && z != b && leq(z, b)) {
          direct = false;
          break;
        }
      if (direct) out.emplace_back(a, b);
    }
  return out;
}

}  // namespace ceerlab
