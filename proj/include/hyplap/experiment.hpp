#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "hyplap/construct.hpp"
#include "hyplap/hypergraph.hpp"
#include "hyplap/labeling.hpp"
#include "hyplap/solver.hpp"

namespace hyplap {

// Method names accepted by the experiment drivers: the solver methods plus
// "graph", which runs the AE scheme on the symmetric k-NN graph G_k.
bool is_experiment_method(const std::string& name);

struct Interp1dInstance {
  PointSet points;
  Labeling labels;
};

// n uniform points on [0,1] from `seed`. With explicit (position, value)
// pairs each label goes to the free point nearest the position; otherwise
// `num_labels` labels go to the points nearest (j + 0.5) / num_labels with
// values drawn uniformly from [0,1]. Throws ParameterError when there are
// more labels than points.
Interp1dInstance make_interp1d_instance(std::size_t n, std::size_t num_labels,
                                        const std::vector<std::pair<double, double>>& explicit_labels,
                                        std::uint64_t seed);

// max over labeled i of |y_i - median of u over e_i \ {x_i}|, e_i being the
// k-NN hyperedge seeded at x_i.
double spike_score(const Hypergraph& knn_h, const Labeling& labels, std::span<const double> u);

struct Interp1dConfig {
  std::size_t n = 1280;
  std::size_t num_labels = 6;
  std::vector<std::pair<double, double>> explicit_labels;
  std::vector<std::size_t> ks{9, 18, 36, 72};
  std::vector<std::string> methods{"fce", "ae-p2"};
  SolverConfig solver;
  std::uint64_t seed = 0;
  std::string out_dir;  // empty: nothing is written
  bool parallel_grid = false;
  bool write_svg = true;
};

struct Interp1dRun {
  std::size_t k = 0;
  std::string method;
  Solution solution;
  double spike = 0.0;
};

struct Interp1dResult {
  Interp1dInstance instance;
  std::vector<Interp1dRun> runs;  // grid order: k outer, method inner
};

// Runs every (k, method) pair. With an output directory it writes
// <method>_k<k>.csv, <method>_k<k>_trace.csv, <method>_k<k>.svg,
// points.txt, labels.txt, metrics.json and manifest.json.
Interp1dResult run_interp1d(const Interp1dConfig& cfg);

struct BenchConfig {
  std::vector<std::string> methods{"ae-p2", "fce", "fh"};
  SolverConfig solver;           // settings of the timed runs
  double reference_tol = 1e-12;  // reference runs stop at this delta ...
  std::size_t reference_max_iter = 10'000'000;  // ... or this many sweeps
  std::size_t fh_reference_iter = 200'000;      // subgradient runs have no delta test
  std::size_t sample_every = 1;
  // Per-method references keyed by method name; missing ones are computed.
  std::vector<std::pair<std::string, VertexFunction>> references;
};

struct BenchSample {
  std::size_t iteration = 0;
  double seconds = 0.0;  // wall time since the solve started, sampling excluded
  double rel_error = 0.0;
};

struct BenchSeries {
  std::string method;
  std::vector<BenchSample> samples;
  SolverReport report;
  SolverReport reference_report;
  bool reference_computed = false;
  VertexFunction reference;

  // First sampled time with rel_error <= target, if any.
  std::optional<double> time_to(double target) const;
};

// Runs each method on (h, labels) and samples relative l2 error against the
// method's own reference solution along the trajectory. Only solver method
// names are accepted; ParameterError otherwise.
std::vector<BenchSeries> bench(const Hypergraph& h, const Labeling& labels, const BenchConfig& cfg);

// Writes one "iter,seconds,rel_error" CSV per series plus bench.json.
void write_bench_outputs(const std::string& out_dir, const std::vector<BenchSeries>& series);

// Minimal SVG: scatter of (x, u) with labeled points highlighted, plus the
// interpolant as a polyline over sorted x.
std::string render_interp_svg(std::span<const double> xs, std::span<const double> u,
                              const Labeling& labels, const std::string& title);

}  // namespace hyplap
