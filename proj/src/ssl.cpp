#include "hyplap/ssl.hpp"

#include <algorithm>
#include <cmath>
#include <future>
#include <numeric>
#include <string>

#include "hyplap/errors.hpp"
#include "hyplap/random.hpp"

namespace hyplap {

void TrainingSet::validate(std::size_t num_vertices) const {
  if (examples.empty()) throw ValidationError("training set is empty");
  if (num_classes == 0) throw ValidationError("training set needs at least one class");
  std::vector<bool> seen(num_vertices, false);
  for (const Example& ex : examples) {
    if (ex.vertex >= num_vertices) throw ValidationError("training vertex out of range");
    if (seen[ex.vertex]) {
      throw ValidationError("vertex " + std::to_string(ex.vertex) + " appears twice in the training set");
    }
    seen[ex.vertex] = true;
    if (ex.label >= num_classes) {
      throw ValidationError("class label " + std::to_string(ex.label) + " out of range");
    }
  }
}

std::vector<bool> TrainingSet::mask(std::size_t num_vertices) const {
  std::vector<bool> m(num_vertices, false);
  for (const Example& ex : examples) m[ex.vertex] = true;
  return m;
}

Prediction train_one_vs_rest(const Hypergraph& h, const TrainingSet& training, Method method,
                             const SolverConfig& cfg, std::size_t threads) {
  const std::size_t n = h.num_vertices();
  training.validate(n);
  const std::size_t classes = training.num_classes;

  auto solve_class = [&](std::size_t c) {
    std::vector<Labeling::Entry> entries;
    entries.reserve(training.examples.size());
    for (const auto& ex : training.examples) {
      entries.push_back({ex.vertex, ex.label == c ? 1.0 : 0.0});
    }
    return solve(h, Labeling(n, std::move(entries)), method, cfg);
  };

  std::vector<Solution> per_class(classes);
  if (threads <= 1 || classes == 1) {
    for (std::size_t c = 0; c < classes; ++c) per_class[c] = solve_class(c);
  } else {
    for (std::size_t first = 0; first < classes; first += threads) {
      const std::size_t last = std::min(classes, first + threads);
      std::vector<std::future<Solution>> pending;
      for (std::size_t c = first; c < last; ++c) {
        pending.push_back(std::async(std::launch::async, solve_class, c));
      }
      for (std::size_t c = first; c < last; ++c) per_class[c] = pending[c - first].get();
    }
  }

  Prediction pred;
  pred.labels.assign(n, 0);
  pred.scores.reserve(classes);
  for (auto& sol : per_class) {
    pred.scores.push_back(std::move(sol.u));
    pred.reports.push_back(std::move(sol.report));
  }
  for (VertexId i = 0; i < n; ++i) {
    std::size_t best = 0;
    for (std::size_t c = 1; c < classes; ++c) {
      if (pred.scores[c][i] > pred.scores[best][i]) best = c;
    }
    pred.labels[i] = best;
  }
  for (const auto& ex : training.examples) pred.labels[ex.vertex] = ex.label;
  return pred;
}

double classification_error(std::span<const std::size_t> predicted,
                            std::span<const std::size_t> truth, const std::vector<bool>& mask) {
  if (predicted.size() != truth.size() || mask.size() != truth.size()) {
    throw ValidationError("prediction, truth and mask lengths differ");
  }
  std::size_t counted = 0;
  std::size_t wrong = 0;
  for (std::size_t i = 0; i < truth.size(); ++i) {
    if (!mask[i]) continue;
    ++counted;
    wrong += predicted[i] != truth[i];
  }
  if (counted == 0) throw ValidationError("evaluation mask is empty");
  return static_cast<double>(wrong) / static_cast<double>(counted);
}

TrainingSet sample_training_set(std::span<const std::size_t> truth, std::size_t num_classes,
                                std::size_t size, std::uint64_t seed) {
  const std::size_t n = truth.size();
  if (size > n) {
    throw ValidationError("training size " + std::to_string(size) + " exceeds n = " + std::to_string(n));
  }
  std::vector<VertexId> order(n);
  std::iota(order.begin(), order.end(), VertexId{0});
  // Partial Fisher-Yates: the first `size` slots are a uniform sample.
  Rng rng(seed);
  for (std::size_t i = 0; i < size; ++i) {
    const std::size_t j = i + static_cast<std::size_t>(uniform_index(rng, n - i));
    std::swap(order[i], order[j]);
  }
  order.resize(size);
  std::sort(order.begin(), order.end());
  TrainingSet t;
  t.num_classes = num_classes;
  for (VertexId v : order) t.examples.push_back({v, truth[v]});
  return t;
}

TrainingSet sample_training_set_rate(std::span<const std::size_t> truth,
                                     std::size_t num_classes, double rate, std::uint64_t seed) {
  if (!(rate >= 0.0 && rate <= 1.0)) throw ParameterError("training rate must lie in [0, 1]");
  const auto size = static_cast<std::size_t>(std::llround(rate * static_cast<double>(truth.size())));
  return sample_training_set(truth, num_classes, size, seed);
}

}  // namespace hyplap
