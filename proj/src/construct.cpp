#include "hyplap/construct.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <string>
#include <unordered_map>
#include <utility>

#include "hyplap/errors.hpp"

namespace hyplap {

PointSet::PointSet(std::size_t dim, std::vector<double> coords)
    : dim_(dim), coords_(std::move(coords)) {
  if (dim_ == 0) throw ValidationError("point dimension must be positive");
  if (coords_.size() % dim_ != 0) {
    throw ValidationError("coordinate count is not a multiple of the dimension");
  }
  if (size() < 2) throw ValidationError("point set needs at least two points");
  for (double c : coords_) {
    if (!std::isfinite(c)) throw ValidationError("point coordinates must be finite");
  }
}

double PointSet::squared_distance(std::size_t i, std::size_t j) const noexcept {
  const double* a = point(i);
  const double* b = point(j);
  double s = 0.0;
  for (std::size_t d = 0; d < dim_; ++d) {
    const double diff = a[d] - b[d];
    s += diff * diff;
  }
  return s;
}

std::vector<std::vector<VertexId>> k_nearest_neighbors(const PointSet& points,
                                                       std::size_t k) {
  const std::size_t n = points.size();
  if (k < 1 || k >= n) {
    throw ParameterError("k must satisfy 1 <= k < n (k=" + std::to_string(k) +
                         ", n=" + std::to_string(n) + ")");
  }
  std::vector<std::vector<VertexId>> result(n);
  std::vector<std::pair<double, VertexId>> candidates;
  candidates.reserve(n - 1);
  for (std::size_t i = 0; i < n; ++i) {
    candidates.clear();
    for (std::size_t j = 0; j < n; ++j) {
      if (j == i) continue;
      candidates.emplace_back(points.squared_distance(i, j), static_cast<VertexId>(j));
    }
    // pair ordering = (distance, id): ties go to the smaller id.
    std::partial_sort(candidates.begin(), candidates.begin() + static_cast<std::ptrdiff_t>(k),
                      candidates.end());
    auto& nearest = result[i];
    nearest.reserve(k);
    for (std::size_t r = 0; r < k; ++r) nearest.push_back(candidates[r].second);
  }
  return result;
}

Hypergraph knn_graph(const PointSet& points, std::size_t k) {
  const auto neighbors = k_nearest_neighbors(points, k);
  std::set<std::pair<VertexId, VertexId>> pairs;
  for (VertexId i = 0; i < neighbors.size(); ++i) {
    for (VertexId j : neighbors[i]) pairs.insert({std::min(i, j), std::max(i, j)});
  }
  std::vector<RawEdge> edges;
  edges.reserve(pairs.size());
  for (const auto& [a, b] : pairs) edges.push_back({1.0, {a, b}});
  return Hypergraph(points.size(), edges);
}

Hypergraph knn_hypergraph(const PointSet& points, std::size_t k) {
  const auto neighbors = k_nearest_neighbors(points, k);
  std::vector<RawEdge> edges(neighbors.size());
  for (VertexId i = 0; i < neighbors.size(); ++i) {
    edges[i].weight = 1.0;
    edges[i].vertices = neighbors[i];
    edges[i].vertices.push_back(i);
  }
  return Hypergraph(points.size(), edges);
}

Hypergraph categorical_hypergraph(const CategoricalTable& table) {
  const std::size_t n = table.num_rows();
  if (n == 0 || table.num_columns() == 0) {
    throw ValidationError("categorical table is empty");
  }
  for (std::size_t r = 0; r < n; ++r) {
    if (table.rows[r].size() != table.num_columns()) {
      throw ValidationError("categorical table row " + std::to_string(r) +
                            " has the wrong number of cells");
    }
  }

  std::vector<RawEdge> edges;
  std::set<std::vector<VertexId>> seen;
  for (std::size_t c = 0; c < table.num_columns(); ++c) {
    // Categories in order of first appearance down the column.
    std::unordered_map<std::string, std::size_t> slot;
    std::vector<std::vector<VertexId>> groups;
    for (std::size_t r = 0; r < n; ++r) {
      const std::string& token = table.rows[r][c];
      if (token.empty()) continue;
      auto [it, inserted] = slot.try_emplace(token, groups.size());
      if (inserted) groups.emplace_back();
      groups[it->second].push_back(static_cast<VertexId>(r));
    }
    for (auto& members : groups) {
      if (members.size() < 2) continue;
      if (!seen.insert(members).second) continue;
      edges.push_back({1.0, std::move(members)});
    }
  }
  return Hypergraph(n, edges);
}

}  // namespace hyplap
