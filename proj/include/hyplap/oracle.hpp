#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "hyplap/hypergraph.hpp"
#include "hyplap/labeling.hpp"

namespace hyplap {

// Desk-scale ground truth for the label-constrained F_H. Nothing here is
// meant for production sizes; every entry point guards on n.

inline constexpr std::size_t kOracleMaxVertices = 64;
inline constexpr std::size_t kOracleDefaultIterations = 1'000'000;
inline constexpr double kDefaultPerturbation = 1e-3;

// Approximate minimizer of F_H^con: subgradient descent from a seeded random
// start in [min y, max y], best iterate kept. Throws SizeError above the guard.
VertexFunction minimize_fh_oracle(const Hypergraph& h, const Labeling& labels, double p,
                                  std::size_t iterations, std::uint64_t seed);

// Vertices pinned by F_H^con at u: both one-vertex perturbations u +/- eps
// increase F_H by more than 1e-10 (1 + F_H(u)). Labeled vertices are always in.
struct DSet {
  struct Witness {
    VertexId vertex;
    EdgeId max_edge;  // u(x_i) attains the max of this hyperedge (within eps)
    EdgeId min_edge;  // ... and the min of this one
  };
  std::vector<VertexId> members;      // ascending
  std::vector<Witness> witnesses;     // one per unlabeled member, ascending vertex
  double eps = kDefaultPerturbation;

  bool contains(VertexId v) const;
  friend bool operator==(const DSet& a, const DSet& b) { return a.members == b.members; }
};

DSet compute_d(const Hypergraph& h, std::span<const double> u, const Labeling& labels, double p,
               double eps = kDefaultPerturbation);

// Per-hyperedge max and min of u1 and u2 agree within tol.
bool check_lemma_maxmin(const Hypergraph& h, std::span<const double> u1,
                        std::span<const double> u2, double tol);

struct PropositionCheck {
  bool holds = false;
  bool maxmin_agree = false;
  bool d_sets_agree = false;
  bool values_agree_on_d = false;
  std::vector<VertexFunction> minimizers;  // one per seed
  std::vector<DSet> d_sets;
  std::vector<double> objectives;
};

// Runs the oracle once per seed and checks that all runs share the
// per-hyperedge extremes, the same D, and the same values on D (within tol).
PropositionCheck check_proposition_d(const Hypergraph& h, const Labeling& labels, double p,
                                     std::span<const std::uint64_t> seeds,
                                     std::size_t iterations = kOracleDefaultIterations,
                                     double tol = 1e-3, double eps = kDefaultPerturbation);

}  // namespace hyplap
