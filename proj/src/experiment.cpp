#include "hyplap/experiment.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <future>
#include <iomanip>
#include <limits>
#include <map>
#include <numeric>
#include <sstream>

#include <nlohmann/json.hpp>

#include "hyplap/errors.hpp"
#include "hyplap/io.hpp"
#include "hyplap/random.hpp"

namespace hyplap {
namespace {

using Clock = std::chrono::steady_clock;
using nlohmann::json;

double median_of(std::vector<double> values) {
  const std::size_t mid = values.size() / 2;
  std::nth_element(values.begin(), values.begin() + static_cast<std::ptrdiff_t>(mid), values.end());
  const double upper = values[mid];
  if (values.size() % 2 == 1) return upper;
  const double lower = *std::max_element(values.begin(), values.begin() + static_cast<std::ptrdiff_t>(mid));
  return 0.5 * (lower + upper);
}

std::ofstream open_out(const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw Error("cannot open '" + path.string() + "' for writing");
  return out;
}

json solver_json(const SolverConfig& cfg) {
  json j;
  j["p"] = cfg.p;
  j["tau"] = cfg.tau ? json(*cfg.tau) : json(nullptr);
  j["tol"] = cfg.tol;
  j["max_iter"] = cfg.max_iter;
  switch (cfg.init) {
    case InitMode::min_label: j["init"] = "min"; break;
    case InitMode::max_label: j["init"] = "max"; break;
    case InitMode::zero: j["init"] = "zero"; break;
    case InitMode::given: j["init"] = "given"; break;
  }
  j["trace_every"] = cfg.trace_every;
  return j;
}

json report_json(const SolverReport& r) {
  json j;
  j["iterations"] = r.iterations;
  j["converged"] = r.converged;
  j["final_delta"] = r.final_delta;
  j["final_residual"] = r.final_residual;
  j["seconds"] = r.seconds;
  j["tau"] = std::isnan(r.tau) ? json(nullptr) : json(r.tau);
  j["tau_halvings"] = r.tau_halvings;
  j["objective"] = std::isnan(r.objective) ? json(nullptr) : json(r.objective);
  j["notes"] = r.notes;
  return j;
}

void write_json(const std::filesystem::path& path, const json& j) {
  auto out = open_out(path);
  out << j.dump(2) << '\n';
}

}  // namespace

bool is_experiment_method(const std::string& name) {
  return name == "ae" || name == "ae-p2" || name == "fce" || name == "fh" || name == "graph";
}

Interp1dInstance make_interp1d_instance(std::size_t n, std::size_t num_labels,
                                        const std::vector<std::pair<double, double>>& explicit_labels,
                                        std::uint64_t seed) {
  const std::size_t count = explicit_labels.empty() ? num_labels : explicit_labels.size();
  if (n < 2) throw ParameterError("interpolation needs at least two points");
  if (count == 0) throw ParameterError("interpolation needs at least one label");
  if (count > n) {
    throw ParameterError(std::to_string(count) + " labels exceed " + std::to_string(n) + " points");
  }
  Rng rng(seed);
  std::vector<double> xs(n);
  for (double& x : xs) x = uniform01(rng);

  std::vector<std::pair<double, double>> targets = explicit_labels;
  if (targets.empty()) {
    for (std::size_t j = 0; j < count; ++j) {
      const double pos = (static_cast<double>(j) + 0.5) / static_cast<double>(count);
      targets.emplace_back(pos, uniform01(rng));
    }
  }
  std::vector<bool> taken(n, false);
  std::vector<Labeling::Entry> entries;
  for (const auto& [pos, value] : targets) {
    if (!std::isfinite(pos)) throw ParameterError("label position must be finite");
    std::size_t best = n;
    for (std::size_t i = 0; i < n; ++i) {
      if (taken[i]) continue;
      if (best == n || std::abs(xs[i] - pos) < std::abs(xs[best] - pos)) best = i;
    }
    taken[best] = true;
    entries.push_back({static_cast<VertexId>(best), value});
  }
  return {PointSet::from_1d(std::move(xs)), Labeling(n, std::move(entries))};
}

double spike_score(const Hypergraph& knn_h, const Labeling& labels, std::span<const double> u) {
  if (u.size() != knn_h.num_vertices()) throw ValidationError("vertex function has the wrong length");
  if (knn_h.num_edges() != knn_h.num_vertices()) {
    throw ValidationError("spike score needs one k-NN hyperedge per vertex");
  }
  double score = 0.0;
  for (const auto& entry : labels.entries()) {
    std::vector<double> neighbours;
    for (VertexId v : knn_h.edge(entry.vertex)) {
      if (v != entry.vertex) neighbours.push_back(u[v]);
    }
    if (neighbours.empty()) continue;
    score = std::max(score, std::abs(entry.value - median_of(std::move(neighbours))));
  }
  return score;
}

Interp1dResult run_interp1d(const Interp1dConfig& cfg) {
  if (cfg.ks.empty()) throw ParameterError("k grid is empty");
  if (cfg.methods.empty()) throw ParameterError("method grid is empty");
  for (const auto& m : cfg.methods) {
    if (!is_experiment_method(m)) throw ParameterError("unknown method '" + m + "'");
  }
  for (std::size_t k : cfg.ks) {
    if (k < 1 || k >= cfg.n) {
      throw ParameterError("k = " + std::to_string(k) + " must lie in [1, n)");
    }
  }

  Interp1dResult result{make_interp1d_instance(cfg.n, cfg.num_labels, cfg.explicit_labels, cfg.seed), {}};
  const PointSet& points = result.instance.points;
  const Labeling& labels = result.instance.labels;

  std::map<std::size_t, Hypergraph> hypergraphs;
  std::map<std::size_t, Hypergraph> graphs;
  const bool needs_graph =
      std::find(cfg.methods.begin(), cfg.methods.end(), "graph") != cfg.methods.end();
  for (std::size_t k : cfg.ks) {
    hypergraphs.try_emplace(k, knn_hypergraph(points, k));
    if (needs_graph) graphs.try_emplace(k, knn_graph(points, k));
  }

  SolverConfig solver = cfg.solver;
  if (!cfg.out_dir.empty() && solver.trace_every == 0) solver.trace_every = 1;

  auto run_one = [&](std::size_t k, const std::string& name) {
    const Hypergraph& hk = hypergraphs.at(k);
    Interp1dRun run;
    run.k = k;
    run.method = name;
    if (name == "graph") {
      const Method m = solver.p == 2.0 ? Method::ae_p2 : Method::ae;
      run.solution = solve(graphs.at(k), labels, m, solver);
    } else {
      run.solution = solve(hk, labels, parse_method(name), solver);
    }
    run.spike = spike_score(hk, labels, run.solution.u);
    return run;
  };

  std::vector<std::pair<std::size_t, std::string>> grid;
  for (std::size_t k : cfg.ks) {
    for (const auto& m : cfg.methods) grid.emplace_back(k, m);
  }
  if (cfg.parallel_grid) {
    std::vector<std::future<Interp1dRun>> pending;
    for (const auto& [k, m] : grid) pending.push_back(std::async(std::launch::async, run_one, k, m));
    for (auto& f : pending) result.runs.push_back(f.get());
  } else {
    for (const auto& [k, m] : grid) result.runs.push_back(run_one(k, m));
  }

  if (cfg.out_dir.empty()) return result;

  const std::filesystem::path dir(cfg.out_dir);
  std::filesystem::create_directories(dir);
  {
    auto out = open_out(dir / "points.txt");
    write_points(out, points);
  }
  {
    auto out = open_out(dir / "labels.txt");
    write_labels(out, labels);
  }
  json metrics = json::array();
  for (const Interp1dRun& run : result.runs) {
    const std::string stem = run.method + "_k" + std::to_string(run.k);
    {
      auto out = open_out(dir / (stem + ".csv"));
      write_solution_csv(out, run.solution.u);
    }
    {
      auto out = open_out(dir / (stem + "_trace.csv"));
      write_trace_csv(out, run.solution.report.trace);
    }
    if (cfg.write_svg) {
      auto out = open_out(dir / (stem + ".svg"));
      out << render_interp_svg(points.coords(), run.solution.u, labels,
                               run.method + ", k = " + std::to_string(run.k));
    }
    json m = report_json(run.solution.report);
    m["k"] = run.k;
    m["method"] = run.method;
    m["spike"] = run.spike;
    metrics.push_back(std::move(m));
  }
  write_json(dir / "metrics.json", metrics);

  json manifest;
  manifest["experiment"] = "interp1d";
  manifest["n"] = cfg.n;
  manifest["seed"] = cfg.seed;
  manifest["ks"] = cfg.ks;
  manifest["methods"] = cfg.methods;
  manifest["parallel_grid"] = cfg.parallel_grid;
  manifest["solver"] = solver_json(solver);
  json placed = json::array();
  for (const auto& e : labels.entries()) {
    placed.push_back({{"vertex", e.vertex}, {"position", points.point(e.vertex)[0]}, {"value", e.value}});
  }
  manifest["labels"] = placed;
  manifest["label_placement"] =
      cfg.explicit_labels.empty() ? "nearest to (j+0.5)/c, values uniform in [0,1]" : "explicit";
  manifest["graph_method"] = "AE scheme on the symmetric k-NN graph";
  write_json(dir / "manifest.json", manifest);
  return result;
}

std::optional<double> BenchSeries::time_to(double target) const {
  for (const BenchSample& s : samples) {
    if (s.rel_error <= target) return s.seconds;
  }
  return std::nullopt;
}

std::vector<BenchSeries> bench(const Hypergraph& h, const Labeling& labels, const BenchConfig& cfg) {
  if (cfg.methods.empty()) throw ParameterError("method grid is empty");
  if (cfg.sample_every == 0) throw ParameterError("sample interval must be positive");
  std::vector<BenchSeries> out;
  for (const std::string& name : cfg.methods) {
    const Method method = parse_method(name);
    BenchSeries series;
    series.method = name;

    auto given = std::find_if(cfg.references.begin(), cfg.references.end(),
                              [&](const auto& r) { return r.first == name; });
    if (given != cfg.references.end()) {
      series.reference = given->second;
    } else {
      SolverConfig ref = cfg.solver;
      ref.observer = nullptr;
      ref.trace_every = 0;
      ref.tol = cfg.reference_tol;
      ref.max_iter = method == Method::fh ? cfg.fh_reference_iter : cfg.reference_max_iter;
      Solution s = solve(h, labels, method, ref);
      series.reference = std::move(s.u);
      series.reference_report = std::move(s.report);
      series.reference_computed = true;
    }

    SolverConfig timed = cfg.solver;
    timed.observe_every = cfg.sample_every;
    double overhead = 0.0;
    const auto start = Clock::now();
    timed.observer = [&](std::size_t iteration, std::span<const double> u) {
      const auto enter = Clock::now();
      const double elapsed = std::chrono::duration<double>(enter - start).count() - overhead;
      series.samples.push_back({iteration, elapsed, relative_l2_error(u, series.reference)});
      overhead += std::chrono::duration<double>(Clock::now() - enter).count();
    };
    Solution s = solve(h, labels, method, timed);
    const double total = std::chrono::duration<double>(Clock::now() - start).count() - overhead;
    if (series.samples.empty() || series.samples.back().iteration != s.report.iterations) {
      series.samples.push_back({s.report.iterations, total, relative_l2_error(s.u, series.reference)});
    }
    series.report = std::move(s.report);
    out.push_back(std::move(series));
  }
  return out;
}

void write_bench_outputs(const std::string& out_dir, const std::vector<BenchSeries>& series) {
  const std::filesystem::path dir(out_dir);
  std::filesystem::create_directories(dir);
  json all = json::array();
  for (const BenchSeries& s : series) {
    {
      auto out = open_out(dir / ("bench_" + s.method + ".csv"));
      out << "iter,seconds,rel_error\n" << std::setprecision(17);
      for (const BenchSample& b : s.samples) {
        out << b.iteration << ',' << b.seconds << ',' << b.rel_error << '\n';
      }
    }
    json j;
    j["method"] = s.method;
    j["report"] = report_json(s.report);
    j["reference_computed"] = s.reference_computed;
    if (s.reference_computed) j["reference_report"] = report_json(s.reference_report);
    j["final_rel_error"] = s.samples.empty() ? json(nullptr) : json(s.samples.back().rel_error);
    const std::pair<const char*, double> targets[] = {
        {"1e-2", 1e-2}, {"1e-3", 1e-3}, {"1e-4", 1e-4}, {"1e-6", 1e-6}};
    for (const auto& [name, target] : targets) {
      const auto t = s.time_to(target);
      j[std::string("seconds_to_") + name] = t ? json(*t) : json(nullptr);
    }
    all.push_back(std::move(j));
  }
  write_json(dir / "bench.json", all);
}

namespace {

std::string xml_escape(const std::string& s) {
  std::string out;
  for (char c : s) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      default: out += c;
    }
  }
  return out;
}

}  // namespace

std::string render_interp_svg(std::span<const double> xs, std::span<const double> u,
                              const Labeling& labels, const std::string& title) {
  if (xs.size() != u.size()) throw ValidationError("coordinates and values differ in length");
  if (xs.empty()) throw ValidationError("nothing to plot");
  constexpr double kWidth = 640.0;
  constexpr double kHeight = 400.0;
  constexpr double kMargin = 40.0;
  const auto [xmin_it, xmax_it] = std::minmax_element(xs.begin(), xs.end());
  const auto [umin_it, umax_it] = std::minmax_element(u.begin(), u.end());
  double x0 = *xmin_it, x1 = *xmax_it, y0 = *umin_it, y1 = *umax_it;
  if (x1 - x0 <= 0.0) x1 = x0 + 1.0;
  if (y1 - y0 <= 0.0) {
    y0 -= 0.5;
    y1 += 0.5;
  }
  auto sx = [&](double x) { return kMargin + (x - x0) / (x1 - x0) * (kWidth - 2 * kMargin); };
  auto sy = [&](double y) { return kHeight - kMargin - (y - y0) / (y1 - y0) * (kHeight - 2 * kMargin); };

  std::vector<std::size_t> order(xs.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return xs[a] < xs[b]; });

  std::ostringstream svg;
  svg << std::fixed << std::setprecision(2);
  svg << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << kWidth << "\" height=\"" << kHeight
      << "\" viewBox=\"0 0 " << kWidth << ' ' << kHeight << "\">\n";
  svg << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  svg << "<text x=\"" << kWidth / 2 << "\" y=\"20\" text-anchor=\"middle\" font-family=\"sans-serif\" "
         "font-size=\"14\">"
      << xml_escape(title) << "</text>\n";
  svg << "<rect x=\"" << kMargin << "\" y=\"" << kMargin << "\" width=\"" << kWidth - 2 * kMargin
      << "\" height=\"" << kHeight - 2 * kMargin << "\" fill=\"none\" stroke=\"#888\"/>\n";
  svg << "<polyline fill=\"none\" stroke=\"#1f5fbf\" stroke-width=\"1.5\" points=\"";
  for (std::size_t i : order) svg << sx(xs[i]) << ',' << sy(u[i]) << ' ';
  svg << "\"/>\n";
  for (std::size_t i : order) {
    svg << "<circle cx=\"" << sx(xs[i]) << "\" cy=\"" << sy(u[i]) << "\" r=\"1.5\" fill=\"#555\"/>\n";
  }
  for (const auto& e : labels.entries()) {
    svg << "<circle cx=\"" << sx(xs[e.vertex]) << "\" cy=\"" << sy(e.value)
        << "\" r=\"5\" fill=\"none\" stroke=\"#d62728\" stroke-width=\"2\"/>\n";
  }
  svg << "</svg>\n";
  return svg.str();
}

}  // namespace hyplap
