#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "hyplap/hypergraph.hpp"
#include "hyplap/labeling.hpp"

namespace hyplap {

inline constexpr double kDefaultFaceTolerance = 1e-9;

// Unordered pairs {i,j} are counted once in F_CE and F_G.

// F_H(u) = sum_k w_k (max_{e_k} u - min_{e_k} u)^p.  Throws ParameterError for p <= 1.
double eval_fh(const Hypergraph& h, std::span<const double> u, double p);

// F_CE(u) = sum_k w_k sum_{i<j in e_k} |u_i - u_j|^p.
double eval_fce(const Hypergraph& h, std::span<const double> u, double p);

// F_G(u) = sum_{edges} w_ij |u_i - u_j|^p. Throws ValidationError unless g is 2-uniform.
double eval_fg(const Hypergraph& g, std::span<const double> u, double p);

// Range of u over hyperedge k.
double edge_range(const Hypergraph& h, std::span<const double> u, EdgeId k);

// The argmax face of B_k at u: vertices of e_k within tol of the hyperedge
// max and min. When max - min <= tol every element of B_k is a maximizer.
struct Face {
  std::vector<VertexId> argmax;
  std::vector<VertexId> argmin;
  bool degenerate = false;
};

Face argmax_face(const Hypergraph& h, std::span<const double> u, EdgeId k,
                 double tol = kDefaultFaceTolerance);

// beta_k = sum lambda_ij (1_{x_i} - 1_{x_j}) with i in argmax, j in argmin.
struct PairCoefficient {
  VertexId max_vertex;
  VertexId min_vertex;
  double coefficient;
};

// One selection per hyperedge. An empty selection is the zero vector,
// admissible only on degenerate hyperedges.
struct Certificate {
  std::vector<std::vector<PairCoefficient>> selections;

  static Certificate zero(std::size_t num_edges) {
    return Certificate{std::vector<std::vector<PairCoefficient>>(num_edges)};
  }
  // beta_k as a dense vector of length n.
  std::vector<double> beta(EdgeId k, std::size_t num_vertices) const;
};

// Throws ValidationError if C is not an admissible selection from the argmax
// faces of (h, u): wrong size, pair outside the face, negative coefficients,
// coefficients not summing to 1 on a non-degenerate hyperedge.
void check_certificate(const Hypergraph& h, std::span<const double> u, const Certificate& c,
                       double tol = kDefaultFaceTolerance);

// q = p sum_k w_k range_k^{p-1} beta_k, accumulated per vertex in ascending
// hyperedge order.
VertexFunction subgradient_from_certificate(const Hypergraph& h, std::span<const double> u,
                                            double p, const Certificate& c,
                                            double tol = kDefaultFaceTolerance);

// sup over unlabeled vertices of |q(x_i)|. A value <= tol certifies u as a
// minimizer of the label-constrained F_H. Throws ValidationError when u
// disagrees with the labels by more than tol.
double verify_stationarity(const Hypergraph& h, std::span<const double> u, double p,
                           const Labeling& labels, const Certificate& c,
                           double tol = kDefaultFaceTolerance);

struct CertificateSearch {
  std::optional<Certificate> certificate;  // set iff residual <= tol
  double residual = 0.0;                   // of the best candidate found
  std::size_t face_pairs = 0;
};

inline constexpr std::size_t kMaxCertificatePairs = 4096;

// Searches for face coefficients making the subgradient vanish at every
// unlabeled vertex (deterministic NNLS). Throws SizeError when the faces hold
// more than kMaxCertificatePairs pairs.
CertificateSearch find_certificate(const Hypergraph& h, std::span<const double> u, double p,
                                   const Labeling& labels, double tol = 1e-9,
                                   double face_tol = kDefaultFaceTolerance);

// {"<edge id>": [{"max": i, "min": j, "coefficient": c}, ...], ...}
std::string certificate_to_json(const Certificate& c);
Certificate certificate_from_json(const std::string& text, std::size_t num_edges);

}  // namespace hyplap
