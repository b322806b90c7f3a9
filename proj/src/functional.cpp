#include "hyplap/functional.hpp"

#include <algorithm>
#include <cmath>
#include <nlohmann/json.hpp>
#include <string>

#include "hyplap/detail/nnls.hpp"
#include "hyplap/errors.hpp"

namespace hyplap {
namespace {

void require_exponent(double p) {
  if (!(p > 1.0) || !std::isfinite(p)) {
    throw ParameterError("exponent p must be a finite real > 1 (got " + std::to_string(p) + ")");
  }
}

void require_length(const Hypergraph& h, std::span<const double> u) {
  if (u.size() != h.num_vertices()) {
    throw ValidationError("vertex function has length " + std::to_string(u.size()) +
                          ", hypergraph has " + std::to_string(h.num_vertices()) +
                          " vertices");
  }
}

double power(double x, double p) { return p == 2.0 ? x * x : std::pow(x, p); }

bool contains(const std::vector<VertexId>& sorted, VertexId v) {
  return std::binary_search(sorted.begin(), sorted.end(), v);
}

}  // namespace

double edge_range(const Hypergraph& h, std::span<const double> u, EdgeId k) {
  auto e = h.edge(k);
  double hi = u[e[0]];
  double lo = hi;
  for (VertexId v : e.subspan(1)) {
    hi = std::max(hi, u[v]);
    lo = std::min(lo, u[v]);
  }
  return hi - lo;
}

double eval_fh(const Hypergraph& h, std::span<const double> u, double p) {
  require_exponent(p);
  require_length(h, u);
  double total = 0.0;
  for (EdgeId k = 0; k < h.num_edges(); ++k) {
    total += h.weight(k) * power(edge_range(h, u, k), p);
  }
  return total;
}

double eval_fce(const Hypergraph& h, std::span<const double> u, double p) {
  require_exponent(p);
  require_length(h, u);
  double total = 0.0;
  for (EdgeId k = 0; k < h.num_edges(); ++k) {
    auto e = h.edge(k);
    double inner = 0.0;
    if (p == 2.0) {
      // sum_{i<j} (u_i - u_j)^2 = |e| sum_i (u_i - mean)^2
      double mean = 0.0;
      for (VertexId v : e) mean += u[v];
      mean /= static_cast<double>(e.size());
      for (VertexId v : e) inner += (u[v] - mean) * (u[v] - mean);
      inner *= static_cast<double>(e.size());
    } else {
      for (std::size_t a = 0; a + 1 < e.size(); ++a) {
        for (std::size_t b = a + 1; b < e.size(); ++b) {
          inner += std::pow(std::abs(u[e[a]] - u[e[b]]), p);
        }
      }
    }
    total += h.weight(k) * inner;
  }
  return total;
}

double eval_fg(const Hypergraph& g, std::span<const double> u, double p) {
  require_exponent(p);
  require_length(g, u);
  if (!g.is_two_uniform()) throw ValidationError("F_G requires a 2-uniform hypergraph");
  double total = 0.0;
  for (EdgeId k = 0; k < g.num_edges(); ++k) {
    auto e = g.edge(k);
    total += g.weight(k) * power(std::abs(u[e[0]] - u[e[1]]), p);
  }
  return total;
}

Face argmax_face(const Hypergraph& h, std::span<const double> u, EdgeId k, double tol) {
  auto e = h.edge(k);
  double hi = u[e[0]];
  double lo = hi;
  for (VertexId v : e) {
    hi = std::max(hi, u[v]);
    lo = std::min(lo, u[v]);
  }
  Face face;
  face.degenerate = hi - lo <= tol;
  for (VertexId v : e) {
    if (u[v] >= hi - tol) face.argmax.push_back(v);
    if (u[v] <= lo + tol) face.argmin.push_back(v);
  }
  return face;
}

std::vector<double> Certificate::beta(EdgeId k, std::size_t num_vertices) const {
  std::vector<double> b(num_vertices, 0.0);
  for (const PairCoefficient& pc : selections.at(k)) {
    b.at(pc.max_vertex) += pc.coefficient;
    b.at(pc.min_vertex) -= pc.coefficient;
  }
  return b;
}

void check_certificate(const Hypergraph& h, std::span<const double> u, const Certificate& c,
                       double tol) {
  require_length(h, u);
  if (c.selections.size() != h.num_edges()) {
    throw ValidationError("certificate covers " + std::to_string(c.selections.size()) +
                          " hyperedges, hypergraph has " + std::to_string(h.num_edges()));
  }
  for (EdgeId k = 0; k < h.num_edges(); ++k) {
    const auto& selection = c.selections[k];
    const Face face = argmax_face(h, u, k, tol);
    const std::string where = "certificate for hyperedge " + std::to_string(k);
    if (selection.empty()) {
      if (!face.degenerate) throw ValidationError(where + " is empty on a non-constant hyperedge");
      continue;
    }
    auto e = h.edge(k);
    double sum = 0.0;
    for (const PairCoefficient& pc : selection) {
      if (!std::isfinite(pc.coefficient) || pc.coefficient < 0.0) {
        throw ValidationError(where + " has a negative coefficient");
      }
      const bool in_face = face.degenerate
                               ? std::binary_search(e.begin(), e.end(), pc.max_vertex) &&
                                     std::binary_search(e.begin(), e.end(), pc.min_vertex)
                               : contains(face.argmax, pc.max_vertex) &&
                                     contains(face.argmin, pc.min_vertex);
      if (!in_face) {
        throw ValidationError(where + " uses pair (" + std::to_string(pc.max_vertex) + "," +
                              std::to_string(pc.min_vertex) + ") outside the argmax face");
      }
      sum += pc.coefficient;
    }
    if (std::abs(sum - 1.0) > 1e-9) {
      throw ValidationError(where + " has coefficients summing to " + std::to_string(sum));
    }
  }
}

VertexFunction subgradient_from_certificate(const Hypergraph& h, std::span<const double> u,
                                            double p, const Certificate& c, double tol) {
  require_exponent(p);
  check_certificate(h, u, c, tol);
  VertexFunction q(h.num_vertices(), 0.0);
  for (EdgeId k = 0; k < h.num_edges(); ++k) {
    if (c.selections[k].empty()) continue;
    const double scale = p * h.weight(k) * std::pow(edge_range(h, u, k), p - 1.0);
    for (const PairCoefficient& pc : c.selections[k]) {
      q[pc.max_vertex] += scale * pc.coefficient;
      q[pc.min_vertex] -= scale * pc.coefficient;
    }
  }
  return q;
}

double verify_stationarity(const Hypergraph& h, std::span<const double> u, double p,
                           const Labeling& labels, const Certificate& c, double tol) {
  require_length(h, u);
  if (labels.num_vertices() != h.num_vertices()) {
    throw ValidationError("labeling and hypergraph disagree on the vertex count");
  }
  if (!labels.matches(u, tol)) throw ValidationError("u does not match the labels");
  const VertexFunction q = subgradient_from_certificate(h, u, p, c, tol);
  double residual = 0.0;
  for (VertexId i = 0; i < q.size(); ++i) {
    if (!labels.is_labeled(i)) residual = std::max(residual, std::abs(q[i]));
  }
  return residual;
}

CertificateSearch find_certificate(const Hypergraph& h, std::span<const double> u, double p,
                                   const Labeling& labels, double tol, double face_tol) {
  require_exponent(p);
  require_length(h, u);
  if (!labels.matches(u, face_tol)) throw ValidationError("u does not match the labels");

  struct Column {
    EdgeId edge;
    VertexId max_vertex;
    VertexId min_vertex;
  };
  std::vector<Column> columns;
  std::vector<EdgeId> active_edges;
  for (EdgeId k = 0; k < h.num_edges(); ++k) {
    const Face face = argmax_face(h, u, k, face_tol);
    if (face.degenerate) continue;
    active_edges.push_back(k);
    for (VertexId i : face.argmax) {
      for (VertexId j : face.argmin) columns.push_back({k, i, j});
    }
    if (columns.size() > kMaxCertificatePairs) {
      throw SizeError("argmax faces hold more than " + std::to_string(kMaxCertificatePairs) +
                      " pairs");
    }
  }

  CertificateSearch search;
  search.face_pairs = columns.size();
  Certificate cert = Certificate::zero(h.num_edges());

  if (!columns.empty()) {
    // Rows: one per unlabeled vertex touched by a face, then one simplex
    // penalty row per active hyperedge.
    constexpr double kSimplexWeight = 1e4;
    std::vector<std::size_t> row_of(h.num_vertices(), static_cast<std::size_t>(-1));
    std::size_t vertex_rows = 0;
    for (const Column& col : columns) {
      for (VertexId v : {col.max_vertex, col.min_vertex}) {
        if (!labels.is_labeled(v) && row_of[v] == static_cast<std::size_t>(-1)) {
          row_of[v] = vertex_rows++;
        }
      }
    }
    std::vector<std::size_t> edge_row(h.num_edges(), 0);
    for (std::size_t a = 0; a < active_edges.size(); ++a) edge_row[active_edges[a]] = vertex_rows + a;
    const std::size_t rows = vertex_rows + active_edges.size();

    std::vector<double> a(rows * columns.size(), 0.0);
    std::vector<double> b(rows, 0.0);
    for (std::size_t a_idx = 0; a_idx < active_edges.size(); ++a_idx) b[vertex_rows + a_idx] = kSimplexWeight;
    for (std::size_t c = 0; c < columns.size(); ++c) {
      const Column& col = columns[c];
      const double scale = p * h.weight(col.edge) * std::pow(edge_range(h, u, col.edge), p - 1.0);
      double* column = a.data() + c * rows;
      if (!labels.is_labeled(col.max_vertex)) column[row_of[col.max_vertex]] += scale;
      if (!labels.is_labeled(col.min_vertex)) column[row_of[col.min_vertex]] -= scale;
      column[edge_row[col.edge]] = kSimplexWeight;
    }

    const detail::NnlsResult solved = detail::nnls(a, rows, columns.size(), b);

    std::vector<double> sums(h.num_edges(), 0.0);
    for (std::size_t c = 0; c < columns.size(); ++c) sums[columns[c].edge] += solved.x[c];
    std::vector<std::size_t> counts(h.num_edges(), 0);
    for (const Column& col : columns) ++counts[col.edge];
    for (std::size_t c = 0; c < columns.size(); ++c) {
      const Column& col = columns[c];
      const double s = sums[col.edge];
      const double lambda = s > 0.0 ? solved.x[c] / s : 1.0 / static_cast<double>(counts[col.edge]);
      if (lambda > 0.0) cert.selections[col.edge].push_back({col.max_vertex, col.min_vertex, lambda});
    }
  }

  search.residual = verify_stationarity(h, u, p, labels, cert, face_tol);
  if (search.residual <= tol) search.certificate = std::move(cert);
  return search;
}

std::string certificate_to_json(const Certificate& c) {
  nlohmann::json out = nlohmann::json::object();
  for (std::size_t k = 0; k < c.selections.size(); ++k) {
    if (c.selections[k].empty()) continue;
    nlohmann::json pairs = nlohmann::json::array();
    for (const PairCoefficient& pc : c.selections[k]) {
      pairs.push_back({{"max", pc.max_vertex}, {"min", pc.min_vertex}, {"coefficient", pc.coefficient}});
    }
    out[std::to_string(k)] = std::move(pairs);
  }
  return out.dump(2);
}

Certificate certificate_from_json(const std::string& text, std::size_t num_edges) {
  Certificate c = Certificate::zero(num_edges);
  nlohmann::json in;
  try {
    in = nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw ValidationError(std::string("certificate JSON: ") + e.what());
  }
  if (!in.is_object()) throw ValidationError("certificate JSON must be an object");
  for (const auto& [key, pairs] : in.items()) {
    std::size_t k = 0;
    try {
      k = std::stoul(key);
    } catch (const std::exception&) {
      throw ValidationError("certificate JSON key '" + key + "' is not a hyperedge id");
    }
    if (k >= num_edges) throw ValidationError("certificate JSON hyperedge id out of range");
    try {
      for (const auto& pc : pairs) {
        c.selections[k].push_back({pc.at("max").get<VertexId>(), pc.at("min").get<VertexId>(),
                                   pc.at("coefficient").get<double>()});
      }
    } catch (const nlohmann::json::exception& e) {
      throw ValidationError("certificate JSON for hyperedge " + key + ": " + e.what());
    }
  }
  return c;
}

}  // namespace hyplap
