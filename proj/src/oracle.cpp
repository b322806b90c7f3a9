#include "hyplap/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "hyplap/errors.hpp"
#include "hyplap/functional.hpp"
#include "hyplap/random.hpp"
#include "hyplap/solver.hpp"

namespace hyplap {
namespace {

void guard_size(const Hypergraph& h) {
  if (h.num_vertices() > kOracleMaxVertices) {
    throw SizeError("oracle is limited to " + std::to_string(kOracleMaxVertices) +
                    " vertices (got " + std::to_string(h.num_vertices()) + ")");
  }
}

}  // namespace

bool DSet::contains(VertexId v) const {
  return std::binary_search(members.begin(), members.end(), v);
}

VertexFunction minimize_fh_oracle(const Hypergraph& h, const Labeling& labels, double p,
                                  std::size_t iterations, std::uint64_t seed) {
  guard_size(h);
  Rng rng(seed);
  SolverConfig cfg;
  cfg.p = p;
  cfg.max_iter = std::max<std::size_t>(iterations, 1);
  cfg.init = InitMode::given;
  cfg.initial.resize(h.num_vertices());
  for (double& x : cfg.initial) x = uniform_real(rng, labels.min_value(), labels.max_value());
  cfg.seed = seed;
  VertexFunction u = solve_fh_subgrad(h, labels, cfg).u;
  // Clamping to the label range shrinks every hyperedge range, so F_H can only drop.
  for (double& x : u) x = std::clamp(x, labels.min_value(), labels.max_value());
  return u;
}

DSet compute_d(const Hypergraph& h, std::span<const double> u, const Labeling& labels, double p,
               double eps) {
  guard_size(h);
  if (!(eps > 0.0)) throw ParameterError("perturbation eps must be positive");
  if (u.size() != h.num_vertices()) throw ValidationError("vertex function has the wrong length");
  const double base = eval_fh(h, u, p);
  const double floor = 1e-10 * (1.0 + base);

  DSet d;
  d.eps = eps;
  VertexFunction v(u.begin(), u.end());
  for (VertexId i = 0; i < h.num_vertices(); ++i) {
    if (labels.is_labeled(i)) {
      d.members.push_back(i);
      continue;
    }
    v[i] = u[i] + eps;
    const double up = eval_fh(h, v, p) - base;
    v[i] = u[i] - eps;
    const double down = eval_fh(h, v, p) - base;
    v[i] = u[i];
    if (up <= floor || down <= floor) continue;

    // Witnesses: the incident hyperedges where u(x_i) is closest to the max
    // and to the min; ascending edge id on ties.
    DSet::Witness w{i, 0, 0};
    double best_hi = std::numeric_limits<double>::infinity();
    double best_lo = std::numeric_limits<double>::infinity();
    for (EdgeId k : h.incident(i)) {
      double mx = -std::numeric_limits<double>::infinity();
      double mn = std::numeric_limits<double>::infinity();
      for (VertexId j : h.edge(k)) {
        mx = std::max(mx, u[j]);
        mn = std::min(mn, u[j]);
      }
      if (mx - u[i] < best_hi) {
        best_hi = mx - u[i];
        w.max_edge = k;
      }
      if (u[i] - mn < best_lo) {
        best_lo = u[i] - mn;
        w.min_edge = k;
      }
    }
    d.members.push_back(i);
    d.witnesses.push_back(w);
  }
  return d;
}

bool check_lemma_maxmin(const Hypergraph& h, std::span<const double> u1,
                        std::span<const double> u2, double tol) {
  if (u1.size() != h.num_vertices() || u2.size() != h.num_vertices()) {
    throw ValidationError("vertex function has the wrong length");
  }
  for (EdgeId k = 0; k < h.num_edges(); ++k) {
    double hi1 = -std::numeric_limits<double>::infinity(), hi2 = hi1;
    double lo1 = std::numeric_limits<double>::infinity(), lo2 = lo1;
    for (VertexId v : h.edge(k)) {
      hi1 = std::max(hi1, u1[v]);
      lo1 = std::min(lo1, u1[v]);
      hi2 = std::max(hi2, u2[v]);
      lo2 = std::min(lo2, u2[v]);
    }
    if (std::abs(hi1 - hi2) > tol || std::abs(lo1 - lo2) > tol) return false;
  }
  return true;
}

PropositionCheck check_proposition_d(const Hypergraph& h, const Labeling& labels, double p,
                                     std::span<const std::uint64_t> seeds,
                                     std::size_t iterations, double tol, double eps) {
  guard_size(h);
  if (seeds.empty()) throw ParameterError("at least one seed is required");
  PropositionCheck out;
  for (std::uint64_t seed : seeds) {
    out.minimizers.push_back(minimize_fh_oracle(h, labels, p, iterations, seed));
    out.d_sets.push_back(compute_d(h, out.minimizers.back(), labels, p, eps));
    out.objectives.push_back(eval_fh(h, out.minimizers.back(), p));
  }
  out.maxmin_agree = true;
  out.d_sets_agree = true;
  out.values_agree_on_d = true;
  const VertexFunction& first = out.minimizers.front();
  for (std::size_t s = 1; s < out.minimizers.size(); ++s) {
    const VertexFunction& other = out.minimizers[s];
    out.maxmin_agree = out.maxmin_agree && check_lemma_maxmin(h, first, other, tol);
    out.d_sets_agree = out.d_sets_agree && out.d_sets[s] == out.d_sets.front();
    for (VertexId v : out.d_sets.front().members) {
      if (std::abs(first[v] - other[v]) > tol) out.values_agree_on_d = false;
    }
  }
  out.holds = out.maxmin_agree && out.d_sets_agree && out.values_agree_on_d;
  return out;
}

}  // namespace hyplap
