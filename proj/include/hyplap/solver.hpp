#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <limits>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "hyplap/hypergraph.hpp"
#include "hyplap/labeling.hpp"

namespace hyplap {

enum class InitMode { min_label, max_label, zero, given };

enum class Method {
  ae,     // fixed-point iteration for the simplified p-Laplacian equation, any p > 1
  ae_p2,  // parameter-free Jacobi scheme, p = 2
  fce,    // explicit gradient descent on the clique-expansion functional
  fh,     // subgradient descent on F_H with the diminishing schedule
};

std::string_view method_name(Method m) noexcept;
// Accepts "ae", "ae-p2", "fce", "fh". Throws ParameterError otherwise.
Method parse_method(std::string_view name);

struct TracePoint {
  std::size_t iteration = 0;
  double delta = 0.0;
  double residual = 0.0;
};

// Called with the iterate after every observed sweep.
using IterateObserver = std::function<void(std::size_t iteration, std::span<const double> u)>;

struct SolverConfig {
  double p = 2.0;
  std::optional<double> tau;  // unset: scale-aware default
  double tol = 1e-8;
  std::size_t max_iter = 1'000'000;
  InitMode init = InitMode::min_label;
  VertexFunction initial;  // used when init == InitMode::given
  std::uint64_t seed = 0;
  std::size_t trace_every = 0;  // 0 disables the trace
  IterateObserver observer;
  std::size_t observe_every = 1;
};

struct SolverReport {
  std::size_t iterations = 0;
  bool converged = false;
  double final_delta = std::numeric_limits<double>::quiet_NaN();
  double final_residual = std::numeric_limits<double>::quiet_NaN();
  double seconds = 0.0;
  double tau = std::numeric_limits<double>::quiet_NaN();
  std::size_t tau_halvings = 0;
  // F_H of the returned iterate for fh, F_CE for fce; NaN otherwise.
  double objective = std::numeric_limits<double>::quiet_NaN();
  std::vector<TracePoint> trace;
  std::vector<std::string> notes;
};

struct Solution {
  VertexFunction u;
  SolverReport report;
};

// L^p_H u at unlabeled vertices, 0 on L, with |0|^{p-2} 0 = 0.
VertexFunction residual_ae(const Hypergraph& h, std::span<const double> u, double p,
                           const Labeling& labels);

double sup_norm(std::span<const double> v) noexcept;

// Labeled entries y_i, unlabeled entries min y (or max y).
VertexFunction monotone_init(const Labeling& labels, InitMode mode, std::size_t num_vertices);

// Step the general-p fixed point uses when cfg.tau is unset.
double default_tau_ae(const Hypergraph& h, const Labeling& labels, double p, double tol);
// Same rule with the clique degree sum_k w_k (|e_k| - 1) in place of the degree.
double default_tau_fce(const Hypergraph& h, const Labeling& labels, double p, double tol);

// Jacobi scheme u(x_i) <- sum_k w_k chi_k (max_k + min_k) / (2 sum_k w_k chi_k).
// Requires a connected hypergraph (ValidationError otherwise). cfg.p is ignored.
Solution solve_ae_p2(const Hypergraph& h, const Labeling& labels, const SolverConfig& cfg);

// u <- u + tau L^p_H u on V \ L. When the update norm grows 10x beyond the
// best seen, the iterate is rolled back and tau halved.
Solution solve_ae(const Hypergraph& h, const Labeling& labels, const SolverConfig& cfg);

// u_i <- u_i + tau sum_k w_k chi_k sum_{j in e_k} |u_j - u_i|^{p-2} (u_j - u_i).
Solution solve_fce_gd(const Hypergraph& h, const Labeling& labels, const SolverConfig& cfg);

// 1 / (t+1)^{min(0.16 t / 1e5, 1)}
double tau_schedule(std::size_t t) noexcept;

// Normalized subgradient descent on F_H over cfg.max_iter iterations; ties in
// the argmax faces get uniform coefficients. Returns the best iterate by F_H.
Solution solve_fh_subgrad(const Hypergraph& h, const Labeling& labels, const SolverConfig& cfg);

Solution solve(const Hypergraph& h, const Labeling& labels, Method method,
               const SolverConfig& cfg);

// ||u - u_ref||_2 / ||u_ref||_2. Throws ValidationError on a zero reference or
// a length mismatch.
double relative_l2_error(std::span<const double> u, std::span<const double> u_ref);

}  // namespace hyplap
