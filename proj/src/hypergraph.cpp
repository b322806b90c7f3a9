#include "hyplap/hypergraph.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <string>
#include <utility>

#include "hyplap/errors.hpp"

namespace hyplap {

Hypergraph::Hypergraph(std::size_t num_vertices, std::span<const RawEdge> edges)
    : num_vertices_(num_vertices) {
  if (num_vertices == 0) {
    throw ValidationError("hypergraph must have at least one vertex");
  }
  edge_offsets_.reserve(edges.size() + 1);
  edge_offsets_.push_back(0);
  weights_.reserve(edges.size());

  std::vector<VertexId> scratch;
  for (std::size_t k = 0; k < edges.size(); ++k) {
    const RawEdge& raw = edges[k];
    if (!std::isfinite(raw.weight) || raw.weight <= 0.0) {
      throw ValidationError("hyperedge " + std::to_string(k) +
                            " has non-positive weight");
    }
    scratch.assign(raw.vertices.begin(), raw.vertices.end());
    for (VertexId v : scratch) {
      if (v >= num_vertices) {
        throw ValidationError("hyperedge " + std::to_string(k) + " has vertex id " +
                              std::to_string(v) + " out of range [0," +
                              std::to_string(num_vertices) + ")");
      }
    }
    std::sort(scratch.begin(), scratch.end());
    scratch.erase(std::unique(scratch.begin(), scratch.end()), scratch.end());
    if (scratch.size() < 2) {
      throw ValidationError("hyperedge " + std::to_string(k) +
                            " has fewer than two distinct vertices");
    }
    pins_.insert(pins_.end(), scratch.begin(), scratch.end());
    edge_offsets_.push_back(pins_.size());
    weights_.push_back(raw.weight);
  }

  // Transpose into incidence lists; walking edges in order keeps each list sorted.
  incidence_offsets_.assign(num_vertices + 1, 0);
  for (VertexId v : pins_) ++incidence_offsets_[v + 1];
  for (std::size_t i = 0; i < num_vertices; ++i) {
    incidence_offsets_[i + 1] += incidence_offsets_[i];
  }
  incidence_.resize(pins_.size());
  std::vector<std::size_t> cursor(incidence_offsets_.begin(), incidence_offsets_.end() - 1);
  for (EdgeId k = 0; k < weights_.size(); ++k) {
    for (VertexId v : edge(k)) incidence_[cursor[v]++] = k;
  }
}

double Hypergraph::weighted_degree(VertexId i) const noexcept {
  double d = 0.0;
  for (EdgeId k : incident(i)) d += weights_[k];
  return d;
}

double Hypergraph::max_weighted_degree() const noexcept {
  double d = 0.0;
  for (VertexId i = 0; i < num_vertices_; ++i) d = std::max(d, weighted_degree(i));
  return d;
}

bool Hypergraph::is_two_uniform() const noexcept {
  for (EdgeId k = 0; k < num_edges(); ++k) {
    if (edge_size(k) != 2) return false;
  }
  return true;
}

std::vector<RawEdge> Hypergraph::raw_edges() const {
  std::vector<RawEdge> out;
  out.reserve(num_edges());
  for (EdgeId k = 0; k < num_edges(); ++k) {
    auto e = edge(k);
    out.push_back({weights_[k], std::vector<VertexId>(e.begin(), e.end())});
  }
  return out;
}

std::vector<std::size_t> connected_components(const Hypergraph& h) {
  constexpr std::size_t kUnset = static_cast<std::size_t>(-1);
  const std::size_t n = h.num_vertices();
  std::vector<std::size_t> component(n, kUnset);
  std::vector<bool> edge_seen(h.num_edges(), false);
  std::vector<VertexId> queue;
  std::size_t next = 0;
  for (VertexId start = 0; start < n; ++start) {
    if (component[start] != kUnset) continue;
    component[start] = next;
    queue.assign(1, start);
    // BFS over the bipartite vertex/hyperedge incidence structure.
    for (std::size_t head = 0; head < queue.size(); ++head) {
      for (EdgeId k : h.incident(queue[head])) {
        if (edge_seen[k]) continue;
        edge_seen[k] = true;
        for (VertexId v : h.edge(k)) {
          if (component[v] == kUnset) {
            component[v] = next;
            queue.push_back(v);
          }
        }
      }
    }
    ++next;
  }
  return component;
}

bool is_connected(const Hypergraph& h) {
  const auto component = connected_components(h);
  return std::all_of(component.begin(), component.end(),
                     [](std::size_t c) { return c == 0; });
}

Hypergraph clique_expansion(const Hypergraph& h) {
  std::map<std::pair<VertexId, VertexId>, double> pairs;
  for (EdgeId k = 0; k < h.num_edges(); ++k) {
    auto e = h.edge(k);
    const double size = static_cast<double>(e.size());
    const double pair_weight = h.weight(k) / (size * (size - 1.0) / 2.0);
    for (std::size_t a = 0; a + 1 < e.size(); ++a) {
      for (std::size_t b = a + 1; b < e.size(); ++b) {
        pairs[{e[a], e[b]}] += pair_weight;
      }
    }
  }
  std::vector<RawEdge> edges;
  edges.reserve(pairs.size());
  for (const auto& [key, w] : pairs) edges.push_back({w, {key.first, key.second}});
  return Hypergraph(h.num_vertices(), edges);
}

}  // namespace hyplap
