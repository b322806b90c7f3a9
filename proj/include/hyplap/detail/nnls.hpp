#pragma once

#include <cstddef>
#include <vector>

namespace hyplap::detail {

struct NnlsResult {
  std::vector<double> x;
  double residual_norm = 0.0;
  std::size_t iterations = 0;
  bool hit_iteration_cap = false;
};

// Lawson-Hanson active-set solver for min ||A x - b||_2 subject to x >= 0.
// A is rows x cols, column-major. Deterministic; the outer loop is capped at
// max_iterations (0 means 3 * cols).
NnlsResult nnls(const std::vector<double>& a_col_major, std::size_t rows, std::size_t cols,
                const std::vector<double>& b, std::size_t max_iterations = 0);

}  // namespace hyplap::detail
