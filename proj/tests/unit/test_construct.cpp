#include <doctest.h>

#include <algorithm>
#include <set>

#include "hyplap/construct.hpp"
#include "hyplap/errors.hpp"
#include "hyplap/random.hpp"

using namespace hyplap;

namespace {

std::vector<std::vector<VertexId>> edge_lists(const Hypergraph& h) {
  std::vector<std::vector<VertexId>> out;
  for (EdgeId k = 0; k < h.num_edges(); ++k) out.emplace_back(h.edge(k).begin(), h.edge(k).end());
  return out;
}

const PointSet kFour = PointSet::from_1d({0.0, 0.1, 0.4, 1.0});

}  // namespace

TEST_CASE("point sets validate their input") {
  CHECK_THROWS_AS(PointSet(0, {1.0, 2.0}), ValidationError);
  CHECK_THROWS_AS(PointSet(2, {1.0, 2.0, 3.0}), ValidationError);
  CHECK_THROWS_AS(PointSet::from_1d({1.0}), ValidationError);
  CHECK_THROWS_AS(PointSet::from_1d({1.0, std::numeric_limits<double>::infinity()}), ValidationError);
  const PointSet p(2, {0.0, 0.0, 3.0, 4.0});
  CHECK(p.size() == 2);
  CHECK(p.squared_distance(0, 1) == 25.0);
}

TEST_CASE("nearest neighbours with distance ties toward the smaller id") {
  const auto nn = k_nearest_neighbors(kFour, 2);
  CHECK(nn[0] == std::vector<VertexId>{1, 2});
  CHECK(nn[1] == std::vector<VertexId>{0, 2});
  CHECK(nn[2] == std::vector<VertexId>{1, 0});
  CHECK(nn[3] == std::vector<VertexId>{2, 1});

  // Vertex 1 is equidistant from 0 and 2.
  const auto tie = k_nearest_neighbors(PointSet::from_1d({0.0, 1.0, 2.0, 5.0}), 1);
  CHECK(tie[1] == std::vector<VertexId>{0});
  // Duplicate points are distinct vertices.
  const auto dup = k_nearest_neighbors(PointSet::from_1d({0.5, 0.5, 0.5}), 1);
  CHECK(dup[0] == std::vector<VertexId>{1});
  CHECK(dup[2] == std::vector<VertexId>{0});

  CHECK_THROWS_AS(k_nearest_neighbors(kFour, 0), ParameterError);
  CHECK_THROWS_AS(k_nearest_neighbors(kFour, 4), ParameterError);
}

TEST_CASE("k-NN graph") {
  using L = std::vector<std::vector<VertexId>>;
  CHECK(edge_lists(knn_graph(kFour, 1)) == L{{0, 1}, {1, 2}, {2, 3}});
  CHECK(edge_lists(knn_graph(PointSet::from_1d({0.0, 1.0}), 1)) == L{{0, 1}});
  CHECK(edge_lists(knn_graph(kFour, 3)) == L{{0, 1}, {0, 2}, {0, 3}, {1, 2}, {1, 3}, {2, 3}});
  const Hypergraph g = knn_graph(kFour, 1);
  CHECK(g.is_two_uniform());
  for (double w : g.weights()) CHECK(w == 1.0);
}

TEST_CASE("k-NN graph adjacency is symmetric and covers every k-NN relation") {
  Rng rng(3);
  for (int trial = 0; trial < 30; ++trial) {
    const std::size_t n = 3 + uniform_index(rng, 40);
    const std::size_t dim = 1 + uniform_index(rng, 3);
    std::vector<double> coords(n * dim);
    for (double& c : coords) c = uniform01(rng);
    const PointSet pts(dim, coords);
    const std::size_t k = 1 + uniform_index(rng, n - 1);
    const Hypergraph g = knn_graph(pts, k);
    std::set<std::pair<VertexId, VertexId>> adj;
    for (EdgeId e = 0; e < g.num_edges(); ++e) {
      adj.insert({g.edge(e)[0], g.edge(e)[1]});
      adj.insert({g.edge(e)[1], g.edge(e)[0]});
    }
    const auto nn = k_nearest_neighbors(pts, k);
    std::size_t expected = 0;
    std::set<std::pair<VertexId, VertexId>> rel;
    for (VertexId i = 0; i < n; ++i) {
      for (VertexId j : nn[i]) {
        rel.insert({i, j});
        rel.insert({j, i});
      }
    }
    expected = rel.size();
    CHECK(adj == rel);
    CHECK(2 * g.num_edges() == expected);
  }
}

TEST_CASE("k-NN hypergraph includes the seed vertex") {
  using L = std::vector<std::vector<VertexId>>;
  CHECK(edge_lists(knn_hypergraph(kFour, 2)) == L{{0, 1, 2}, {0, 1, 2}, {0, 1, 2}, {1, 2, 3}});
  CHECK(edge_lists(knn_hypergraph(PointSet::from_1d({0.0, 1.0}), 1)) == L{{0, 1}, {0, 1}});
}

TEST_CASE("k-NN hypergraph at the 1D experiment scale") {
  Rng rng(2024);
  std::vector<double> xs(1280);
  for (double& x : xs) x = uniform01(rng);
  const Hypergraph h = knn_hypergraph(PointSet::from_1d(xs), 9);
  CHECK(h.num_vertices() == 1280);
  CHECK(h.num_edges() == 1280);
  for (EdgeId k = 0; k < h.num_edges(); ++k) {
    CHECK(h.edge_size(k) == 10);
    const auto e = h.edge(k);
    CHECK(std::binary_search(e.begin(), e.end(), k));
  }
}

TEST_CASE("categorical hypergraph") {
  using L = std::vector<std::vector<VertexId>>;
  SUBCASE("grouping and singleton removal") {
    const CategoricalTable t{{"f1", "f2"}, {{"A", "X"}, {"A", "Y"}, {"B", "X"}}};
    const Hypergraph h = categorical_hypergraph(t);
    CHECK(edge_lists(h) == L{{0, 1}, {0, 2}});
    for (double w : h.weights()) CHECK(w == 1.0);
  }
  SUBCASE("duplicate hyperedges appear once") {
    const CategoricalTable t{{"a", "b"}, {{"u", "p"}, {"u", "p"}, {"v", "q"}, {"v", "q"}}};
    const Hypergraph h = categorical_hypergraph(t);
    CHECK(edge_lists(h) == L{{0, 1}, {2, 3}});
    for (double w : h.weights()) CHECK(w == 1.0);
  }
  SUBCASE("one shared category spans V") {
    const CategoricalTable t{{"only"}, {{"z"}, {"z"}, {"z"}, {"z"}}};
    CHECK(edge_lists(categorical_hypergraph(t)) == L{{0, 1, 2, 3}});
  }
  SUBCASE("missing cells join nothing") {
    const CategoricalTable t{{"a", "b"}, {{"x", ""}, {"x", "m"}, {"", "m"}}};
    CHECK(edge_lists(categorical_hypergraph(t)) == L{{0, 1}, {1, 2}});
  }
  SUBCASE("errors") {
    CHECK_THROWS_AS(categorical_hypergraph(CategoricalTable{{"a"}, {}}), ValidationError);
    CHECK_THROWS_AS(categorical_hypergraph(CategoricalTable{{"a", "b"}, {{"x", "y"}, {"x"}}}),
                    ValidationError);
  }
}

TEST_CASE("categorical hyperedges are distinct and bounded by the feature count") {
  Rng rng(8);
  for (int trial = 0; trial < 50; ++trial) {
    const std::size_t rows = 2 + uniform_index(rng, 40);
    const std::size_t cols = 1 + uniform_index(rng, 5);
    CategoricalTable t;
    for (std::size_t c = 0; c < cols; ++c) t.columns.push_back("c" + std::to_string(c));
    for (std::size_t r = 0; r < rows; ++r) {
      std::vector<std::string> row;
      for (std::size_t c = 0; c < cols; ++c) row.push_back(std::string(1, static_cast<char>('a' + uniform_index(rng, 3))));
      t.rows.push_back(row);
    }
    const Hypergraph h = categorical_hypergraph(t);
    std::set<std::vector<VertexId>> distinct;
    for (const auto& e : edge_lists(h)) distinct.insert(e);
    CHECK(distinct.size() == h.num_edges());
    for (VertexId v = 0; v < h.num_vertices(); ++v) CHECK(h.incident(v).size() <= cols);
  }
}
