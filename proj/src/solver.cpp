#include "hyplap/solver.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <string>

#include "hyplap/errors.hpp"
#include "hyplap/functional.hpp"

namespace hyplap {
namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

// |s|^{p-2} s with the convention |0|^{p-2} 0 = 0.
double signed_power(double s, double p) {
  if (p == 2.0) return s;
  if (s == 0.0) return 0.0;
  return std::copysign(std::pow(std::abs(s), p - 1.0), s);
}

void check_problem(const Hypergraph& h, const Labeling& labels, double p) {
  if (!(p > 1.0) || !std::isfinite(p)) {
    throw ParameterError("exponent p must be a finite real > 1");
  }
  if (labels.num_vertices() != h.num_vertices()) {
    throw ValidationError("labeling and hypergraph disagree on the vertex count");
  }
}

void check_solvable(const Hypergraph& h, const Labeling& labels, const SolverConfig& cfg,
                    double p) {
  check_problem(h, labels, p);
  if (!(cfg.tol > 0.0)) throw ParameterError("tol must be positive");
  if (cfg.max_iter < 1) throw ParameterError("max_iter must be at least 1");
  if (cfg.tau && !(*cfg.tau > 0.0)) throw ParameterError("tau must be positive");
  if (!is_connected(h)) {
    throw ValidationError("hypergraph is not connected; the Dirichlet problem is not well posed");
  }
}

VertexFunction initial_iterate(const Hypergraph& h, const Labeling& labels,
                               const SolverConfig& cfg) {
  VertexFunction u;
  switch (cfg.init) {
    case InitMode::min_label:
    case InitMode::max_label:
      u = monotone_init(labels, cfg.init, h.num_vertices());
      break;
    case InitMode::zero:
      u.assign(h.num_vertices(), 0.0);
      break;
    case InitMode::given:
      if (cfg.initial.size() != h.num_vertices()) {
        throw ValidationError("initial iterate has the wrong length");
      }
      u = cfg.initial;
      break;
  }
  labels.impose(u);
  return u;
}

// Per-hyperedge extremes of u: phase one of every sweep.
void edge_extremes(const Hypergraph& h, std::span<const double> u, std::vector<double>& hi,
                   std::vector<double>& lo) {
  for (EdgeId k = 0; k < h.num_edges(); ++k) {
    auto e = h.edge(k);
    double mx = u[e[0]];
    double mn = mx;
    for (VertexId v : e.subspan(1)) {
      const double x = u[v];
      mx = x > mx ? x : mx;
      mn = x < mn ? x : mn;
    }
    hi[k] = mx;
    lo[k] = mn;
  }
}

// L^p_H at vertex i from precomputed extremes.
double ae_operator_at(const Hypergraph& h, std::span<const double> u, double p,
                      const std::vector<double>& hi, const std::vector<double>& lo,
                      VertexId i) {
  double s = 0.0;
  const double twice = 2.0 * u[i];
  for (EdgeId k : h.incident(i)) s += h.weight(k) * signed_power(hi[k] + lo[k] - twice, p);
  return s;
}

// Shared bookkeeping for the iterative solvers.
class Recorder {
 public:
  Recorder(const Hypergraph& h, const Labeling& labels, const SolverConfig& cfg, double p,
           SolverReport& report)
      : h_(h), labels_(labels), cfg_(cfg), p_(p), report_(report) {}

  void after_sweep(std::size_t iteration, double delta, std::span<const double> u) {
    if (cfg_.trace_every > 0 && iteration % cfg_.trace_every == 0) {
      report_.trace.push_back({iteration, delta, sup_norm(residual_ae(h_, u, p_, labels_))});
    }
    if (cfg_.observer && cfg_.observe_every > 0 && iteration % cfg_.observe_every == 0) {
      cfg_.observer(iteration, u);
    }
  }

  void finish(std::size_t iteration, double delta, std::span<const double> u) {
    report_.iterations = iteration;
    report_.final_delta = delta;
    report_.final_residual = sup_norm(residual_ae(h_, u, p_, labels_));
    if (cfg_.trace_every > 0 && iteration > 0 &&
        (report_.trace.empty() || report_.trace.back().iteration != iteration)) {
      report_.trace.push_back({iteration, delta, report_.final_residual});
    }
  }

 private:
  const Hypergraph& h_;
  const Labeling& labels_;
  const SolverConfig& cfg_;
  double p_;
  SolverReport& report_;
};

// Explicit iteration u <- u + tau * direction(u) on V \ L with divergence
// control. direction fills `step` with the unscaled update at unlabeled vertices.
template <typename Direction>
Solution run_explicit(const Hypergraph& h, const Labeling& labels, const SolverConfig& cfg,
                      double residual_p, double tau, Direction direction) {
  const auto start = Clock::now();
  Solution sol;
  sol.u = initial_iterate(h, labels, cfg);
  sol.report.tau = tau;
  Recorder recorder(h, labels, cfg, residual_p, sol.report);
  const auto free_vertices = labels.unlabeled();
  if (free_vertices.empty()) {
    sol.report.converged = true;
    recorder.finish(0, 0.0, sol.u);
    sol.report.seconds = seconds_since(start);
    return sol;
  }

  constexpr std::size_t kMaxHalvings = 60;
  // A period-two oscillation that stops contracting for this many sweeps
  // counts as a stall. It happens for p < 2, where the step map is not
  // Lipschitz near flat hyperedges and a fixed tau cannot settle.
  constexpr std::size_t kStallSweeps = 50;
  VertexFunction step(h.num_vertices(), 0.0);
  VertexFunction last_change(h.num_vertices(), 0.0);
  VertexFunction best_u = sol.u;
  double best_delta = std::numeric_limits<double>::infinity();
  double delta = std::numeric_limits<double>::infinity();
  double delta_prev = delta;
  double delta_prev2 = delta;
  std::size_t stalled = 0;
  std::size_t it = 0;
  while (it < cfg.max_iter) {
    ++it;
    direction(sol.u, step);
    delta = 0.0;
    bool finite = true;
    bool flipped = false;
    for (VertexId i : free_vertices) {
      const double change = tau * step[i];
      sol.u[i] += change;
      if (std::abs(change) > delta) {
        delta = std::abs(change);
        flipped = change * last_change[i] < 0.0;
      }
      last_change[i] = change;
      finite = finite && std::isfinite(sol.u[i]);
    }
    stalled = flipped && delta > 0.9 * delta_prev2 ? stalled + 1 : 0;
    delta_prev2 = delta_prev;
    delta_prev = delta;
    const bool diverged = !finite || delta > 10.0 * best_delta;
    if (diverged || stalled >= kStallSweeps) {
      if (sol.report.tau_halvings == kMaxHalvings) {
        sol.report.notes.push_back(std::string(diverged ? "divergence" : "oscillation") +
                                   " persisted after " + std::to_string(kMaxHalvings) +
                                   " step halvings");
        sol.u = best_u;
        delta = best_delta;
        break;
      }
      sol.u = best_u;
      tau *= 0.5;
      ++sol.report.tau_halvings;
      sol.report.notes.push_back("iteration " + std::to_string(it) + ": " +
                                 (diverged ? "divergence" : "oscillation") +
                                 " detected, tau halved to " + std::to_string(tau));
      best_delta = std::numeric_limits<double>::infinity();
      delta_prev = delta_prev2 = best_delta;
      stalled = 0;
      std::fill(last_change.begin(), last_change.end(), 0.0);
      continue;
    }
    if (delta < best_delta) {
      best_delta = delta;
      best_u = sol.u;
    }
    recorder.after_sweep(it, delta, sol.u);
    if (delta <= cfg.tol) {
      sol.report.converged = true;
      break;
    }
  }
  sol.report.tau = tau;
  if (!sol.report.converged) {
    sol.report.notes.push_back("max_iter reached without convergence");
  }
  recorder.finish(it, delta, sol.u);
  sol.report.seconds = seconds_since(start);
  return sol;
}

double default_tau_from_degree(double degree, const Labeling& labels, double p, double tol) {
  if (degree <= 0.0) return 1.0;
  if (p >= 2.0) {
    return 0.9 / (2.0 * degree * std::pow(std::max(labels.range(), tol), p - 2.0));
  }
  return 0.1 / degree;
}

}  // namespace

std::string_view method_name(Method m) noexcept {
  switch (m) {
    case Method::ae: return "ae";
    case Method::ae_p2: return "ae-p2";
    case Method::fce: return "fce";
    case Method::fh: return "fh";
  }
  return "?";
}

Method parse_method(std::string_view name) {
  if (name == "ae") return Method::ae;
  if (name == "ae-p2") return Method::ae_p2;
  if (name == "fce") return Method::fce;
  if (name == "fh") return Method::fh;
  throw ParameterError("unknown method '" + std::string(name) + "' (expected ae, ae-p2, fce, fh)");
}

double sup_norm(std::span<const double> v) noexcept {
  double s = 0.0;
  for (double x : v) s = std::max(s, std::abs(x));
  return s;
}

VertexFunction residual_ae(const Hypergraph& h, std::span<const double> u, double p,
                           const Labeling& labels) {
  check_problem(h, labels, p);
  if (u.size() != h.num_vertices()) throw ValidationError("vertex function has the wrong length");
  std::vector<double> hi(h.num_edges());
  std::vector<double> lo(h.num_edges());
  edge_extremes(h, u, hi, lo);
  VertexFunction r(h.num_vertices(), 0.0);
  for (VertexId i = 0; i < h.num_vertices(); ++i) {
    if (!labels.is_labeled(i)) r[i] = ae_operator_at(h, u, p, hi, lo, i);
  }
  return r;
}

VertexFunction monotone_init(const Labeling& labels, InitMode mode, std::size_t num_vertices) {
  if (mode != InitMode::min_label && mode != InitMode::max_label) {
    throw ParameterError("monotone_init takes min_label or max_label");
  }
  VertexFunction u(num_vertices,
                   mode == InitMode::min_label ? labels.min_value() : labels.max_value());
  labels.impose(u);
  return u;
}

double default_tau_ae(const Hypergraph& h, const Labeling& labels, double p, double tol) {
  return default_tau_from_degree(h.max_weighted_degree(), labels, p, tol);
}

double default_tau_fce(const Hypergraph& h, const Labeling& labels, double p, double tol) {
  double degree = 0.0;
  for (VertexId i = 0; i < h.num_vertices(); ++i) {
    double d = 0.0;
    for (EdgeId k : h.incident(i)) d += h.weight(k) * static_cast<double>(h.edge_size(k) - 1);
    degree = std::max(degree, d);
  }
  return default_tau_from_degree(degree, labels, p, tol);
}

Solution solve_ae_p2(const Hypergraph& h, const Labeling& labels, const SolverConfig& cfg) {
  check_solvable(h, labels, cfg, 2.0);
  const auto start = Clock::now();
  Solution sol;
  sol.u = initial_iterate(h, labels, cfg);
  Recorder recorder(h, labels, cfg, 2.0, sol.report);
  const auto free_vertices = labels.unlabeled();
  if (free_vertices.empty()) {
    sol.report.converged = true;
    recorder.finish(0, 0.0, sol.u);
    sol.report.seconds = seconds_since(start);
    return sol;
  }

  std::vector<double> inv_twice_degree(h.num_vertices(), 0.0);
  for (VertexId i : free_vertices) inv_twice_degree[i] = 0.5 / h.weighted_degree(i);
  std::vector<double> hi(h.num_edges());
  std::vector<double> lo(h.num_edges());
  VertexFunction next = sol.u;

  double delta = std::numeric_limits<double>::infinity();
  std::size_t it = 0;
  while (it < cfg.max_iter) {
    ++it;
    edge_extremes(h, sol.u, hi, lo);
    delta = 0.0;
    for (VertexId i : free_vertices) {
      double s = 0.0;
      double floor = std::numeric_limits<double>::infinity();
      double ceil = -floor;
      for (EdgeId k : h.incident(i)) {
        s += h.weight(k) * (hi[k] + lo[k]);
        floor = std::min(floor, lo[k]);
        ceil = std::max(ceil, hi[k]);
      }
      // The exact average lies in [floor, ceil]; clamping absorbs rounding so
      // the computed map stays order-preserving from the first sweep on.
      next[i] = std::clamp(s * inv_twice_degree[i], floor, ceil);
      delta = std::max(delta, std::abs(next[i] - sol.u[i]));
    }
    sol.u.swap(next);
    recorder.after_sweep(it, delta, sol.u);
    if (delta <= cfg.tol) {
      sol.report.converged = true;
      break;
    }
  }
  if (!sol.report.converged) sol.report.notes.push_back("max_iter reached without convergence");
  recorder.finish(it, delta, sol.u);
  sol.report.seconds = seconds_since(start);
  return sol;
}

Solution solve_ae(const Hypergraph& h, const Labeling& labels, const SolverConfig& cfg) {
  check_solvable(h, labels, cfg, cfg.p);
  const double p = cfg.p;
  const double tau = cfg.tau.value_or(default_tau_ae(h, labels, p, cfg.tol));
  std::vector<double> hi(h.num_edges());
  std::vector<double> lo(h.num_edges());
  const auto free_vertices = labels.unlabeled();
  return run_explicit(h, labels, cfg, p, tau, [&](const VertexFunction& u, VertexFunction& step) {
    edge_extremes(h, u, hi, lo);
    for (VertexId i : free_vertices) step[i] = ae_operator_at(h, u, p, hi, lo, i);
  });
}

Solution solve_fce_gd(const Hypergraph& h, const Labeling& labels, const SolverConfig& cfg) {
  check_solvable(h, labels, cfg, cfg.p);
  const double p = cfg.p;
  const double tau = cfg.tau.value_or(default_tau_fce(h, labels, p, cfg.tol));
  std::vector<double> edge_sum(h.num_edges());
  const auto free_vertices = labels.unlabeled();
  Solution sol = run_explicit(h, labels, cfg, p, tau, [&](const VertexFunction& u, VertexFunction& step) {
    if (p == 2.0) {
      for (EdgeId k = 0; k < h.num_edges(); ++k) {
        double s = 0.0;
        for (VertexId v : h.edge(k)) s += u[v];
        edge_sum[k] = s;
      }
      for (VertexId i : free_vertices) {
        double s = 0.0;
        for (EdgeId k : h.incident(i)) {
          s += h.weight(k) * (edge_sum[k] - static_cast<double>(h.edge_size(k)) * u[i]);
        }
        step[i] = s;
      }
      return;
    }
    for (VertexId i : free_vertices) {
      double s = 0.0;
      for (EdgeId k : h.incident(i)) {
        double inner = 0.0;
        for (VertexId j : h.edge(k)) inner += signed_power(u[j] - u[i], p);
        s += h.weight(k) * inner;
      }
      step[i] = s;
    }
  });
  sol.report.objective = eval_fce(h, sol.u, p);
  return sol;
}

double tau_schedule(std::size_t t) noexcept {
  const double td = static_cast<double>(t);
  const double exponent = std::min(0.16 * td / 1e5, 1.0);
  return 1.0 / std::pow(td + 1.0, exponent);
}

Solution solve_fh_subgrad(const Hypergraph& h, const Labeling& labels, const SolverConfig& cfg) {
  check_solvable(h, labels, cfg, cfg.p);
  const double p = cfg.p;
  const auto start = Clock::now();
  Solution sol;
  VertexFunction u = initial_iterate(h, labels, cfg);
  const auto free_vertices = labels.unlabeled();

  std::vector<double> hi(h.num_edges());
  std::vector<double> lo(h.num_edges());
  VertexFunction q(h.num_vertices(), 0.0);
  sol.u = u;
  double best = std::numeric_limits<double>::infinity();
  double last_step = 0.0;
  std::size_t t = 0;
  for (;; ++t) {
    edge_extremes(h, u, hi, lo);
    double objective = 0.0;
    for (EdgeId k = 0; k < h.num_edges(); ++k) {
      const double r = hi[k] - lo[k];
      objective += h.weight(k) * (p == 2.0 ? r * r : std::pow(r, p));
    }
    if (objective < best) {
      best = objective;
      sol.u = u;
    }
    if (cfg.observer && cfg.observe_every > 0 && t % cfg.observe_every == 0) {
      cfg.observer(t, sol.u);
    }
    if (free_vertices.empty()) {
      sol.report.converged = true;
      break;
    }
    if (t == cfg.max_iter) break;

    // Uniform coefficients over tied extremes: beta = mean(1_argmax) - mean(1_argmin).
    std::fill(q.begin(), q.end(), 0.0);
    for (EdgeId k = 0; k < h.num_edges(); ++k) {
      const double r = hi[k] - lo[k];
      if (r <= 0.0) continue;
      auto e = h.edge(k);
      std::size_t n_hi = 0;
      std::size_t n_lo = 0;
      for (VertexId v : e) {
        n_hi += u[v] == hi[k];
        n_lo += u[v] == lo[k];
      }
      const double scale = p * h.weight(k) * (p == 2.0 ? r : std::pow(r, p - 1.0));
      const double up = scale / static_cast<double>(n_hi);
      const double down = scale / static_cast<double>(n_lo);
      for (VertexId v : e) {
        if (u[v] == hi[k]) q[v] += up;
        if (u[v] == lo[k]) q[v] -= down;
      }
    }
    double norm2 = 0.0;
    double q_sup = 0.0;
    for (VertexId i : free_vertices) {
      norm2 += q[i] * q[i];
      q_sup = std::max(q_sup, std::abs(q[i]));
    }
    if (norm2 == 0.0) {
      sol.report.converged = true;
      sol.report.notes.push_back("zero subgradient on V \\ L: exact minimizer reached");
      break;
    }
    last_step = tau_schedule(t);
    const double scale = last_step / std::sqrt(norm2);
    for (VertexId i : free_vertices) u[i] -= scale * q[i];
    if (cfg.trace_every > 0 && (t + 1) % cfg.trace_every == 0) {
      sol.report.trace.push_back({t + 1, last_step, q_sup});
    }
  }
  sol.report.iterations = t;
  sol.report.final_delta = last_step;
  sol.report.objective = best;
  sol.report.final_residual = sup_norm(residual_ae(h, sol.u, p, labels));
  sol.report.seconds = seconds_since(start);
  return sol;
}

Solution solve(const Hypergraph& h, const Labeling& labels, Method method,
               const SolverConfig& cfg) {
  switch (method) {
    case Method::ae: return solve_ae(h, labels, cfg);
    case Method::ae_p2: return solve_ae_p2(h, labels, cfg);
    case Method::fce: return solve_fce_gd(h, labels, cfg);
    case Method::fh: return solve_fh_subgrad(h, labels, cfg);
  }
  throw ParameterError("unknown method");
}

double relative_l2_error(std::span<const double> u, std::span<const double> u_ref) {
  if (u.size() != u_ref.size()) throw ValidationError("relative error of vectors of unequal length");
  double num = 0.0;
  double den = 0.0;
  for (std::size_t i = 0; i < u.size(); ++i) {
    num += (u[i] - u_ref[i]) * (u[i] - u_ref[i]);
    den += u_ref[i] * u_ref[i];
  }
  if (den == 0.0) throw ValidationError("relative error against a zero reference");
  return std::sqrt(num / den);
}

}  // namespace hyplap
