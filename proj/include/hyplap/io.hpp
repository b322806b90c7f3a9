#pragma once

#include <cstddef>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "hyplap/construct.hpp"
#include "hyplap/hypergraph.hpp"
#include "hyplap/labeling.hpp"
#include "hyplap/solver.hpp"

namespace hyplap {

// Hypergraph text format:
//   # comment
//   H <n> <m>
//   E <weight> <v1> <v2> ...      (m lines, 0-based ids)
// Writers emit vertices ascending and weights with round-trip precision.
Hypergraph read_hypergraph(std::istream& in, const std::string& source = "<stream>");
void write_hypergraph(std::ostream& out, const Hypergraph& h);
Hypergraph load_hypergraph(const std::string& path);
void save_hypergraph(const std::string& path, const Hypergraph& h);

// Labels: one "<vertex> <value>" per line, '#' comments.
Labeling read_labels(std::istream& in, std::size_t num_vertices,
                     const std::string& source = "<stream>");
void write_labels(std::ostream& out, const Labeling& labels);
Labeling load_labels(const std::string& path, std::size_t num_vertices);

// Class labels: one "<vertex> <class index>" per line covering every vertex once.
std::vector<std::size_t> read_class_labels(std::istream& in, std::size_t num_vertices,
                                           const std::string& source = "<stream>");
std::vector<std::size_t> load_class_labels(const std::string& path, std::size_t num_vertices);

// Point cloud: one whitespace-separated coordinate tuple per line.
PointSet read_points(std::istream& in, const std::string& source = "<stream>");
void write_points(std::ostream& out, const PointSet& points);
PointSet load_points(const std::string& path);

struct CategoricalDataset {
  CategoricalTable table;                // features only
  std::vector<std::size_t> truth;        // class index per row
  std::vector<std::string> class_names;  // index -> token, first-appearance order
};

// CSV with a header row. The label column is removed from the features and
// mapped to class indices; cells equal to missing_token (or empty) are
// treated as missing. Throws ParseError for malformed rows and
// ValidationError for an unknown label column.
CategoricalDataset read_categorical_csv(std::istream& in, const std::string& label_column,
                                        const std::string& missing_token = "?",
                                        const std::string& source = "<stream>");
CategoricalDataset load_categorical_csv(const std::string& path, const std::string& label_column,
                                        const std::string& missing_token = "?");

// "vertex,value" with a header line.
void write_solution_csv(std::ostream& out, std::span<const double> u);
VertexFunction read_solution_csv(std::istream& in, const std::string& source = "<stream>");

// "iter,delta_sup,residual_sup" with a header line.
void write_trace_csv(std::ostream& out, std::span<const TracePoint> trace);

}  // namespace hyplap
