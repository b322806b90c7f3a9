#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

namespace hyplap {

using VertexId = std::uint32_t;
using EdgeId = std::uint32_t;

// Unvalidated hyperedge as handed to the constructor.
struct RawEdge {
  double weight = 1.0;
  std::vector<VertexId> vertices;
};

// Immutable weighted hypergraph H = (V, E, W).
//
// Hyperedges are stored in compressed form: the vertices of edge k are the
// strictly increasing run pins()[edge_offsets[k] .. edge_offsets[k+1]). The
// per-vertex incidence lists are the exact transpose and are sorted by edge
// id, which fixes the summation order of every per-vertex accumulation.
class Hypergraph {
 public:
  // Validates and normalizes: ids within an edge are deduplicated and sorted.
  // Throws ValidationError on n == 0, out-of-range ids, edges with fewer than
  // two distinct vertices, and non-positive or non-finite weights.
  Hypergraph(std::size_t num_vertices, std::span<const RawEdge> edges);
  Hypergraph(std::size_t num_vertices, const std::vector<RawEdge>& edges)
      : Hypergraph(num_vertices, std::span<const RawEdge>(edges)) {}

  std::size_t num_vertices() const noexcept { return num_vertices_; }
  std::size_t num_edges() const noexcept { return weights_.size(); }
  std::size_t num_pins() const noexcept { return pins_.size(); }

  std::span<const VertexId> edge(EdgeId k) const noexcept {
    return {pins_.data() + edge_offsets_[k], edge_offsets_[k + 1] - edge_offsets_[k]};
  }
  std::size_t edge_size(EdgeId k) const noexcept {
    return edge_offsets_[k + 1] - edge_offsets_[k];
  }
  double weight(EdgeId k) const noexcept { return weights_[k]; }
  std::span<const double> weights() const noexcept { return weights_; }

  // Hyperedges containing vertex i, ascending.
  std::span<const EdgeId> incident(VertexId i) const noexcept {
    return {incidence_.data() + incidence_offsets_[i],
            incidence_offsets_[i + 1] - incidence_offsets_[i]};
  }

  // sum_k w_k chi_k(x_i)
  double weighted_degree(VertexId i) const noexcept;
  double max_weighted_degree() const noexcept;

  // Every hyperedge has exactly two vertices.
  bool is_two_uniform() const noexcept;

  std::vector<RawEdge> raw_edges() const;

  friend bool operator==(const Hypergraph&, const Hypergraph&) = default;

 private:
  std::size_t num_vertices_ = 0;
  std::vector<std::size_t> edge_offsets_;
  std::vector<VertexId> pins_;
  std::vector<double> weights_;
  std::vector<std::size_t> incidence_offsets_;
  std::vector<EdgeId> incidence_;
};

// True iff every vertex pair is joined by a chain of pairwise intersecting
// hyperedges. A single vertex is connected; an isolated vertex in a larger
// hypergraph is not.
bool is_connected(const Hypergraph& h);

// Connected components as a label per vertex (0-based, in order of the
// smallest vertex of each component).
std::vector<std::size_t> connected_components(const Hypergraph& h);

// Weighted clique expansion: each hyperedge e_k contributes w_k / C(|e_k|, 2)
// to every unordered pair inside it; parallel pairs are summed. The result
// is 2-uniform with edges in lexicographic pair order.
Hypergraph clique_expansion(const Hypergraph& h);

}  // namespace hyplap
