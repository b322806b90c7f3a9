#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "hyplap/hypergraph.hpp"

namespace hyplap {

// Point cloud of arbitrary dimension, row-major. A 1D cloud has dim == 1.
class PointSet {
 public:
  PointSet(std::size_t dim, std::vector<double> coords);
  static PointSet from_1d(std::vector<double> xs) { return PointSet(1, std::move(xs)); }

  std::size_t dim() const noexcept { return dim_; }
  std::size_t size() const noexcept { return coords_.size() / dim_; }
  const double* point(std::size_t i) const noexcept { return coords_.data() + i * dim_; }
  const std::vector<double>& coords() const noexcept { return coords_; }

  double squared_distance(std::size_t i, std::size_t j) const noexcept;

 private:
  std::size_t dim_;
  std::vector<double> coords_;
};

// For every point, the ids of its k nearest other points by Euclidean
// distance, closest first, equal distances broken toward the smaller id.
std::vector<std::vector<VertexId>> k_nearest_neighbors(const PointSet& points, std::size_t k);

// Symmetric k-NN graph: {i,j} is an edge iff j is among the k nearest of i or
// i among the k nearest of j. Unit weights, edges in lexicographic order.
Hypergraph knn_graph(const PointSet& points, std::size_t k);

// One hyperedge per vertex: x_i together with its k nearest neighbours
// (cardinality k+1), unit weight. Hyperedges are not deduplicated, so m == n.
Hypergraph knn_hypergraph(const PointSet& points, std::size_t k);

// Rectangular table of categorical tokens. Cells equal to the missing token
// are carried as empty strings.
struct CategoricalTable {
  std::vector<std::string> columns;
  std::vector<std::vector<std::string>> rows;

  std::size_t num_rows() const noexcept { return rows.size(); }
  std::size_t num_columns() const noexcept { return columns.size(); }
};

// One hyperedge per (feature, category) joining all rows with that value.
// Empty (missing) cells join nothing. Hyperedges with fewer than two rows are
// dropped and exact duplicates removed (first occurrence kept); weight 1.
Hypergraph categorical_hypergraph(const CategoricalTable& table);

}  // namespace hyplap
