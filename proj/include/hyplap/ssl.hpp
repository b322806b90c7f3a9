#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "hyplap/hypergraph.hpp"
#include "hyplap/solver.hpp"

namespace hyplap {

// Labeled vertices with class indices in [0, num_classes).
struct TrainingSet {
  struct Example {
    VertexId vertex;
    std::size_t label;
  };
  std::vector<Example> examples;
  std::size_t num_classes = 0;

  // Throws ValidationError on empty sets, duplicate or out-of-range vertices,
  // and labels >= num_classes.
  void validate(std::size_t num_vertices) const;
  std::vector<bool> mask(std::size_t num_vertices) const;
};

struct Prediction {
  std::vector<std::size_t> labels;             // per vertex
  std::vector<VertexFunction> scores;          // scores[c][i] = u_c(x_i)
  std::vector<SolverReport> reports;           // one per class
};

// One-vs-rest interpolation: for each class c, solve with boundary data
// 1 on examples of class c and 0 on the other examples, then label every
// unlabeled vertex by the argmax score (smallest class index on ties).
// Labeled vertices keep their given class. Solver non-convergence is
// reported per class, never thrown. With threads > 1 the per-class solves
// run concurrently; results do not depend on the thread count.
Prediction train_one_vs_rest(const Hypergraph& h, const TrainingSet& training, Method method,
                             const SolverConfig& cfg, std::size_t threads = 1);

// Fraction of masked vertices where predicted != truth. Throws
// ValidationError on an empty mask or mismatched lengths.
double classification_error(std::span<const std::size_t> predicted,
                            std::span<const std::size_t> truth, const std::vector<bool>& mask);

// Uniform sample of `size` distinct vertices without replacement, labeled
// from truth. Reproducible for a fixed seed.
TrainingSet sample_training_set(std::span<const std::size_t> truth, std::size_t num_classes,
                                std::size_t size, std::uint64_t seed);
// Size is round(rate * n).
TrainingSet sample_training_set_rate(std::span<const std::size_t> truth,
                                     std::size_t num_classes, double rate, std::uint64_t seed);

}  // namespace hyplap
