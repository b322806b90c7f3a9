// hyplap command-line front end.
#include <CLI11.hpp>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <numeric>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "hyplap/construct.hpp"
#include "hyplap/errors.hpp"
#include "hyplap/experiment.hpp"
#include "hyplap/functional.hpp"
#include "hyplap/hypergraph.hpp"
#include "hyplap/io.hpp"
#include "hyplap/oracle.hpp"
#include "hyplap/random.hpp"
#include "hyplap/solver.hpp"
#include "hyplap/ssl.hpp"

namespace fs = std::filesystem;
using nlohmann::json;
using namespace hyplap;

namespace {

struct CommonOptions {
  std::string method = "ae-p2";
  double p = 2.0;
  std::optional<double> tau;
  double tol = 1e-8;
  std::size_t max_iter = 1'000'000;
  std::string init = "min";
  std::size_t trace_every = 0;
  std::uint64_t seed = 0;
  std::string out;

  SolverConfig solver() const {
    SolverConfig cfg;
    cfg.p = p;
    cfg.tau = tau;
    cfg.tol = tol;
    cfg.max_iter = max_iter;
    cfg.seed = seed;
    cfg.trace_every = trace_every;
    if (init == "min") cfg.init = InitMode::min_label;
    else if (init == "max") cfg.init = InitMode::max_label;
    else if (init == "zero") cfg.init = InitMode::zero;
    else throw ParameterError("unknown init '" + init + "' (min, max, zero)");
    return cfg;
  }

  json to_json() const {
    return {{"method", method}, {"p", p},           {"tau", tau ? json(*tau) : json(nullptr)},
            {"tol", tol},       {"max_iter", max_iter}, {"init", init},
            {"trace_every", trace_every}, {"seed", seed}};
  }
};

void add_common(CLI::App* app, CommonOptions& o, bool with_method = true) {
  if (with_method) {
    app->add_option("--method", o.method, "ae | ae-p2 | fce | fh")->capture_default_str();
  }
  app->add_option("--p", o.p, "exponent p > 1")->capture_default_str();
  app->add_option("--tau", o.tau, "fixed step size (default: scale-aware)");
  app->add_option("--tol", o.tol, "stop when the sup-norm update falls below this")->capture_default_str();
  app->add_option("--max-iter", o.max_iter, "iteration cap")->capture_default_str();
  app->add_option("--init", o.init, "min | max | zero")->capture_default_str();
  app->add_option("--trace-every", o.trace_every, "trace interval in sweeps (0: off)")->capture_default_str();
  app->add_option("--seed", o.seed, "random seed")->capture_default_str();
}

void write_file(const fs::path& path, const std::string& text) {
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  std::ofstream out(path);
  if (!out) throw Error("cannot open '" + path.string() + "' for writing");
  out << text;
}

json report_json(const SolverReport& r) {
  auto num = [](double x) { return std::isfinite(x) ? json(x) : json(nullptr); };
  return {{"iterations", r.iterations},     {"converged", r.converged},
          {"final_delta", num(r.final_delta)}, {"final_residual", num(r.final_residual)},
          {"seconds", r.seconds},           {"tau", num(r.tau)},
          {"tau_halvings", r.tau_halvings}, {"objective", num(r.objective)},
          {"notes", r.notes}};
}

// ---- solve ---------------------------------------------------------------

struct SolveArgs {
  CommonOptions common;
  std::string hypergraph;
  std::string labels;
};

int run_solve(const SolveArgs& a) {
  const Hypergraph h = load_hypergraph(a.hypergraph);
  const Labeling labels = load_labels(a.labels, h.num_vertices());
  const Method method = parse_method(a.common.method);
  const Solution sol = solve(h, labels, method, a.common.solver());

  json summary = report_json(sol.report);
  summary["method"] = a.common.method;
  summary["F_H"] = eval_fh(h, sol.u, a.common.p);
  summary["F_CE"] = eval_fce(h, sol.u, a.common.p);
  std::cout << summary.dump(2) << '\n';

  if (!a.common.out.empty()) {
    const fs::path dir(a.common.out);
    fs::create_directories(dir);
    std::ostringstream csv;
    write_solution_csv(csv, sol.u);
    write_file(dir / "solution.csv", csv.str());
    std::ostringstream trace;
    write_trace_csv(trace, sol.report.trace);
    write_file(dir / "trace.csv", trace.str());
    write_file(dir / "metrics.json", summary.dump(2) + "\n");
    json manifest = a.common.to_json();
    manifest["experiment"] = "solve";
    manifest["hypergraph"] = a.hypergraph;
    manifest["labels"] = a.labels;
    write_file(dir / "manifest.json", manifest.dump(2) + "\n");
  }
  return sol.report.converged || method == Method::fh ? 0 : 3;
}

// ---- ssl -----------------------------------------------------------------

struct SslArgs {
  CommonOptions common;
  std::string dataset;
  std::string labels;
  std::string label_column = "class";
  std::string missing = "?";
  std::optional<std::size_t> train_size;
  std::optional<double> train_rate;
  std::size_t runs = 10;
  std::size_t threads = 1;
  bool eval_all = false;
};

int run_ssl(const SslArgs& a) {
  std::optional<Hypergraph> loaded;
  std::vector<std::size_t> truth;
  std::size_t classes = 0;
  if (fs::path(a.dataset).extension() == ".csv") {
    const CategoricalDataset ds = load_categorical_csv(a.dataset, a.label_column, a.missing);
    loaded = categorical_hypergraph(ds.table);
    truth = ds.truth;
    classes = ds.class_names.size();
  } else {
    if (a.labels.empty()) throw ParameterError("--labels is required for hypergraph datasets");
    loaded = load_hypergraph(a.dataset);
    truth = load_class_labels(a.labels, loaded->num_vertices());
    classes = *std::max_element(truth.begin(), truth.end()) + 1;
  }
  const Hypergraph& h = *loaded;
  if (a.train_size.has_value() == a.train_rate.has_value()) {
    throw ParameterError("give exactly one of --train-size and --train-rate");
  }
  if (a.runs == 0) throw ParameterError("--runs must be positive");
  const Method method = parse_method(a.common.method);
  const SolverConfig cfg = a.common.solver();

  json per_run = json::array();
  std::vector<double> errors;
  double total_seconds = 0.0;
  for (std::size_t r = 0; r < a.runs; ++r) {
    const std::uint64_t seed = a.common.seed + r;
    const TrainingSet t = a.train_size
                              ? sample_training_set(truth, classes, *a.train_size, seed)
                              : sample_training_set_rate(truth, classes, *a.train_rate, seed);
    const auto start = std::chrono::steady_clock::now();
    const Prediction pred = train_one_vs_rest(h, t, method, cfg, a.threads);
    const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    std::vector<bool> mask = t.mask(h.num_vertices());
    if (a.eval_all) mask.assign(h.num_vertices(), true);
    else mask.flip();
    const double err = classification_error(pred.labels, truth, mask);
    errors.push_back(err);
    total_seconds += seconds;
    std::size_t unconverged = 0;
    double slowest = 0.0;
    for (const auto& rep : pred.reports) {
      unconverged += !rep.converged;
      slowest = std::max(slowest, rep.seconds);
    }
    per_run.push_back({{"seed", seed},
                       {"train_size", t.examples.size()},
                       {"error", err},
                       {"seconds", seconds},
                       {"max_class_seconds", slowest},
                       {"unconverged_classes", unconverged}});
    std::cerr << "run " << r << ": error " << 100.0 * err << "% in " << seconds << " s\n";
  }
  const double mean = std::accumulate(errors.begin(), errors.end(), 0.0) / static_cast<double>(errors.size());
  double var = 0.0;
  for (double e : errors) var += (e - mean) * (e - mean);
  const double stddev = errors.size() > 1 ? std::sqrt(var / static_cast<double>(errors.size() - 1)) : 0.0;

  json metrics;
  metrics["dataset"] = a.dataset;
  metrics["num_vertices"] = h.num_vertices();
  metrics["num_edges"] = h.num_edges();
  metrics["num_classes"] = classes;
  metrics["eval_mask"] = a.eval_all ? "all" : "unlabeled";
  metrics["config"] = a.common.to_json();
  metrics["runs"] = per_run;
  metrics["errors"] = errors;
  metrics["mean"] = mean;
  metrics["std"] = stddev;
  metrics["seconds_per_run"] = total_seconds / static_cast<double>(a.runs);
  std::cout << metrics.dump(2) << '\n';
  if (!a.common.out.empty()) write_file(a.common.out, metrics.dump(2) + "\n");
  return 0;
}

// ---- interp1d ------------------------------------------------------------

struct Interp1dArgs {
  CommonOptions common;
  std::size_t n = 1280;
  std::size_t num_labels = 6;
  std::vector<std::string> label_specs;
  std::vector<std::size_t> ks{9, 18, 36, 72};
  std::vector<std::string> methods{"fce", "ae-p2"};
  bool parallel_grid = false;
  bool no_svg = false;
};

std::pair<double, double> parse_label_spec(const std::string& s) {
  const auto colon = s.find(':');
  if (colon == std::string::npos) throw ParameterError("label '" + s + "' is not pos:value");
  try {
    std::size_t used = 0;
    const double pos = std::stod(s.substr(0, colon), &used);
    if (used != colon) throw std::invalid_argument(s);
    const std::string rest = s.substr(colon + 1);
    const double value = std::stod(rest, &used);
    if (used != rest.size()) throw std::invalid_argument(s);
    return {pos, value};
  } catch (const std::logic_error&) {
    throw ParameterError("label '" + s + "' is not pos:value");
  }
}

int run_interp(const Interp1dArgs& a) {
  Interp1dConfig cfg;
  cfg.n = a.n;
  cfg.num_labels = a.num_labels;
  for (const auto& s : a.label_specs) cfg.explicit_labels.push_back(parse_label_spec(s));
  cfg.ks = a.ks;
  cfg.methods = a.methods;
  cfg.solver = a.common.solver();
  cfg.seed = a.common.seed;
  cfg.out_dir = a.common.out;
  cfg.parallel_grid = a.parallel_grid;
  cfg.write_svg = !a.no_svg;
  const Interp1dResult result = run_interp1d(cfg);
  json summary = json::array();
  for (const auto& run : result.runs) {
    json j = report_json(run.solution.report);
    j["k"] = run.k;
    j["method"] = run.method;
    j["spike"] = run.spike;
    summary.push_back(std::move(j));
  }
  std::cout << summary.dump(2) << '\n';
  return 0;
}

// ---- knn -----------------------------------------------------------------

struct KnnArgs {
  std::string points;
  std::size_t n = 0;
  std::uint64_t seed = 0;
  std::size_t k = 9;
  bool graph = false;
  std::string out;
};

int run_knn(const KnnArgs& a) {
  std::optional<PointSet> pts;
  if (!a.points.empty()) {
    pts = load_points(a.points);
  } else {
    if (a.n < 2) throw ParameterError("give --points FILE or --n >= 2");
    Rng rng(a.seed);
    std::vector<double> xs(a.n);
    for (double& x : xs) x = uniform01(rng);
    pts = PointSet::from_1d(std::move(xs));
  }
  const Hypergraph h = a.graph ? knn_graph(*pts, a.k) : knn_hypergraph(*pts, a.k);
  if (a.out.empty()) {
    write_hypergraph(std::cout, h);
  } else {
    save_hypergraph(a.out, h);
    std::cerr << "wrote " << h.num_vertices() << " vertices, " << h.num_edges() << " edges to " << a.out
              << '\n';
  }
  return 0;
}

// ---- verify --------------------------------------------------------------

struct VerifyArgs {
  std::string hypergraph;
  std::string labels;
  std::string solution;
  double p = 2.0;
  std::size_t iterations = kOracleDefaultIterations;
  std::vector<std::uint64_t> seeds{1, 2};
  double tol = 1e-3;
  double eps = kDefaultPerturbation;
};

json dset_json(const DSet& d) {
  json w = json::array();
  for (const auto& x : d.witnesses) {
    w.push_back({{"vertex", x.vertex}, {"max_edge", x.max_edge}, {"min_edge", x.min_edge}});
  }
  return {{"members", d.members}, {"witnesses", w}, {"eps", d.eps}};
}

int run_verify(const VerifyArgs& a) {
  const Hypergraph h = load_hypergraph(a.hypergraph);
  const Labeling labels = load_labels(a.labels, h.num_vertices());
  json out;
  out["p"] = a.p;
  out["connected"] = is_connected(h);

  if (!a.solution.empty()) {
    std::ifstream in(a.solution);
    if (!in) throw Error("cannot open '" + a.solution + "'");
    const VertexFunction u = read_solution_csv(in, a.solution);
    if (u.size() != h.num_vertices()) throw ValidationError("solution length differs from n");
    json s;
    s["F_H"] = eval_fh(h, u, a.p);
    s["ae_residual_sup"] = sup_norm(residual_ae(h, u, a.p, labels));
    s["d_set"] = dset_json(compute_d(h, u, labels, a.p, a.eps));
    const CertificateSearch cs = find_certificate(h, u, a.p, labels);
    s["certificate_residual"] = cs.residual;
    s["certificate"] = cs.certificate ? json::parse(certificate_to_json(*cs.certificate)) : json(nullptr);
    out["solution"] = s;
  }

  const PropositionCheck pc = check_proposition_d(h, labels, a.p, a.seeds, a.iterations, a.tol, a.eps);
  json runs = json::array();
  for (std::size_t s = 0; s < a.seeds.size(); ++s) {
    runs.push_back({{"seed", a.seeds[s]},
                    {"minimizer", pc.minimizers[s]},
                    {"F_H", pc.objectives[s]},
                    {"d_set", dset_json(pc.d_sets[s])}});
  }
  out["oracle_runs"] = runs;
  out["maxmin_agree"] = pc.maxmin_agree;
  out["d_sets_agree"] = pc.d_sets_agree;
  out["values_agree_on_d"] = pc.values_agree_on_d;
  out["proposition_holds"] = pc.holds;
  out["tol"] = a.tol;
  std::cout << out.dump(2) << '\n';
  return pc.holds ? 0 : 4;
}

// ---- bench ---------------------------------------------------------------

struct BenchArgs {
  CommonOptions common;
  std::string hypergraph;
  std::string labels;
  std::size_t n = 1280;
  std::size_t k = 72;
  std::size_t num_labels = 6;
  std::vector<std::string> methods{"ae-p2", "fce", "fh"};
  std::size_t sample_every = 1;
  double reference_tol = 1e-12;
  std::size_t reference_max_iter = 10'000'000;
  std::size_t fh_reference_iter = 200'000;
};

int run_bench(const BenchArgs& a) {
  std::optional<Hypergraph> h;
  std::optional<Labeling> labels;
  json source;
  if (!a.hypergraph.empty()) {
    if (a.labels.empty()) throw ParameterError("--labels is required with --hypergraph");
    h = load_hypergraph(a.hypergraph);
    labels = load_labels(a.labels, h->num_vertices());
    source = {{"hypergraph", a.hypergraph}, {"labels", a.labels}};
  } else {
    Interp1dInstance inst = make_interp1d_instance(a.n, a.num_labels, {}, a.common.seed);
    h = knn_hypergraph(inst.points, a.k);
    labels = inst.labels;
    source = {{"interp1d_n", a.n}, {"k", a.k}, {"num_labels", a.num_labels}};
  }
  BenchConfig cfg;
  cfg.methods = a.methods;
  cfg.solver = a.common.solver();
  cfg.sample_every = a.sample_every;
  cfg.reference_tol = a.reference_tol;
  cfg.reference_max_iter = a.reference_max_iter;
  cfg.fh_reference_iter = a.fh_reference_iter;
  const auto series = bench(*h, *labels, cfg);

  json summary = json::array();
  for (const auto& s : series) {
    const auto t3 = s.time_to(1e-3);
    summary.push_back({{"method", s.method},
                       {"iterations", s.report.iterations},
                       {"final_rel_error", s.samples.back().rel_error},
                       {"seconds_to_1e-3", t3 ? json(*t3) : json(nullptr)}});
  }
  std::cout << summary.dump(2) << '\n';
  if (!a.common.out.empty()) {
    write_bench_outputs(a.common.out, series);
    json manifest = a.common.to_json();
    manifest["experiment"] = "bench";
    manifest["source"] = source;
    manifest["methods"] = a.methods;
    manifest["sample_every"] = a.sample_every;
    manifest["reference"] = {{"definition", "per-method run to delta <= reference_tol or reference_max_iter sweeps"},
                             {"reference_tol", a.reference_tol},
                             {"reference_max_iter", a.reference_max_iter},
                             {"fh_reference_iter", a.fh_reference_iter}};
    write_file(fs::path(a.common.out) / "manifest.json", manifest.dump(2) + "\n");
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Hypergraph p-Laplacian interpolation and semi-supervised learning"};
  app.require_subcommand(1);

  SolveArgs solve_args;
  auto* solve_cmd = app.add_subcommand("solve", "interpolate labels on a hypergraph");
  add_common(solve_cmd, solve_args.common);
  solve_cmd->add_option("--hypergraph,-H", solve_args.hypergraph, "hypergraph file")->required()->check(CLI::ExistingFile);
  solve_cmd->add_option("--labels,-L", solve_args.labels, "labels file")->required()->check(CLI::ExistingFile);
  solve_cmd->add_option("--out", solve_args.common.out, "output directory");

  SslArgs ssl_args;
  ssl_args.common.tol = 1e-4;  // classification workloads stop earlier
  auto* ssl_cmd = app.add_subcommand("ssl", "one-vs-rest semi-supervised classification");
  add_common(ssl_cmd, ssl_args.common);
  ssl_cmd->add_option("--dataset", ssl_args.dataset, "categorical CSV or hypergraph file")->required()->check(CLI::ExistingFile);
  ssl_cmd->add_option("--labels", ssl_args.labels, "class labels for a hypergraph dataset")->check(CLI::ExistingFile);
  ssl_cmd->add_option("--label-column", ssl_args.label_column, "class column of a CSV dataset")->capture_default_str();
  ssl_cmd->add_option("--missing", ssl_args.missing, "missing-value token in a CSV dataset")->capture_default_str();
  ssl_cmd->add_option("--train-size", ssl_args.train_size, "labeled vertices per run");
  ssl_cmd->add_option("--train-rate", ssl_args.train_rate, "labeled fraction per run");
  ssl_cmd->add_option("--runs", ssl_args.runs, "seeded runs")->capture_default_str();
  ssl_cmd->add_option("--threads", ssl_args.threads, "concurrent per-class solves")->capture_default_str();
  ssl_cmd->add_flag("--eval-all", ssl_args.eval_all, "evaluate on V instead of V \\ L");
  ssl_cmd->add_option("--out", ssl_args.common.out, "metrics JSON path");

  Interp1dArgs interp_args;
  auto* interp_cmd = app.add_subcommand("interp1d", "1D interpolation on k-NN graphs and hypergraphs");
  add_common(interp_cmd, interp_args.common, false);
  interp_cmd->add_option("--n", interp_args.n, "number of points")->capture_default_str();
  interp_cmd->add_option("--num-labels", interp_args.num_labels, "labels placed automatically")->capture_default_str();
  interp_cmd->add_option("--label", interp_args.label_specs, "explicit label pos:value (repeatable)");
  interp_cmd->add_option("--k", interp_args.ks, "k grid")->capture_default_str();
  interp_cmd->add_option("--methods", interp_args.methods, "ae | ae-p2 | fce | fh | graph")->capture_default_str();
  interp_cmd->add_flag("--parallel-grid", interp_args.parallel_grid, "run grid points concurrently");
  interp_cmd->add_flag("--no-svg", interp_args.no_svg, "skip SVG output");
  interp_cmd->add_option("--out", interp_args.common.out, "output directory");

  KnnArgs knn_args;
  auto* knn_cmd = app.add_subcommand("knn", "build a k-NN hypergraph (or graph) from points");
  knn_cmd->add_option("--points", knn_args.points, "point file")->check(CLI::ExistingFile);
  knn_cmd->add_option("--n", knn_args.n, "sample n uniform 1D points instead");
  knn_cmd->add_option("--seed", knn_args.seed, "seed for --n")->capture_default_str();
  knn_cmd->add_option("--k", knn_args.k, "neighbours per point")->capture_default_str();
  knn_cmd->add_flag("--graph", knn_args.graph, "emit the symmetric k-NN graph");
  knn_cmd->add_option("--out", knn_args.out, "hypergraph file (default stdout)");

  VerifyArgs verify_args;
  auto* verify_cmd = app.add_subcommand("verify", "oracle checks of the uniqueness set on a small instance");
  verify_cmd->add_option("--hypergraph,-H", verify_args.hypergraph, "hypergraph file")->required()->check(CLI::ExistingFile);
  verify_cmd->add_option("--labels,-L", verify_args.labels, "labels file")->required()->check(CLI::ExistingFile);
  verify_cmd->add_option("--solution", verify_args.solution, "solution CSV to certify")->check(CLI::ExistingFile);
  verify_cmd->add_option("--p", verify_args.p, "exponent p > 1")->capture_default_str();
  verify_cmd->add_option("--iterations", verify_args.iterations, "subgradient iterations per seed")->capture_default_str();
  verify_cmd->add_option("--seeds", verify_args.seeds, "oracle seeds")->capture_default_str();
  verify_cmd->add_option("--tol", verify_args.tol, "agreement tolerance")->capture_default_str();
  verify_cmd->add_option("--eps", verify_args.eps, "perturbation size")->capture_default_str();

  BenchArgs bench_args;
  auto* bench_cmd = app.add_subcommand("bench", "relative error versus wall time");
  add_common(bench_cmd, bench_args.common, false);
  bench_cmd->add_option("--hypergraph,-H", bench_args.hypergraph, "hypergraph file")->check(CLI::ExistingFile);
  bench_cmd->add_option("--labels,-L", bench_args.labels, "labels file")->check(CLI::ExistingFile);
  bench_cmd->add_option("--n", bench_args.n, "1D instance size when no hypergraph is given")->capture_default_str();
  bench_cmd->add_option("--k", bench_args.k, "k of the 1D instance")->capture_default_str();
  bench_cmd->add_option("--num-labels", bench_args.num_labels, "labels of the 1D instance")->capture_default_str();
  bench_cmd->add_option("--methods", bench_args.methods, "ae | ae-p2 | fce | fh")->capture_default_str();
  bench_cmd->add_option("--sample-every", bench_args.sample_every, "sampling interval in sweeps")->capture_default_str();
  bench_cmd->add_option("--reference-tol", bench_args.reference_tol)->capture_default_str();
  bench_cmd->add_option("--reference-max-iter", bench_args.reference_max_iter)->capture_default_str();
  bench_cmd->add_option("--fh-reference-iter", bench_args.fh_reference_iter)->capture_default_str();
  bench_cmd->add_option("--out", bench_args.common.out, "output directory");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*solve_cmd) return run_solve(solve_args);
    if (*ssl_cmd) return run_ssl(ssl_args);
    if (*interp_cmd) return run_interp(interp_args);
    if (*knn_cmd) return run_knn(knn_args);
    if (*verify_cmd) return run_verify(verify_args);
    if (*bench_cmd) return run_bench(bench_args);
  } catch (const std::exception& e) {
    std::cerr << "hyplap: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
