#include "hyplap/detail/nnls.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <limits>

namespace hyplap::detail {
namespace {

// Least squares restricted to the passive columns; other entries are zero.
Eigen::VectorXd solve_passive(const Eigen::MatrixXd& a, const Eigen::VectorXd& b,
                              const std::vector<bool>& passive) {
  std::vector<Eigen::Index> cols;
  for (Eigen::Index j = 0; j < a.cols(); ++j) {
    if (passive[static_cast<std::size_t>(j)]) cols.push_back(j);
  }
  Eigen::MatrixXd sub(a.rows(), static_cast<Eigen::Index>(cols.size()));
  for (std::size_t c = 0; c < cols.size(); ++c) sub.col(static_cast<Eigen::Index>(c)) = a.col(cols[c]);
  const Eigen::VectorXd zs = sub.colPivHouseholderQr().solve(b);
  Eigen::VectorXd z = Eigen::VectorXd::Zero(a.cols());
  for (std::size_t c = 0; c < cols.size(); ++c) z(cols[c]) = zs(static_cast<Eigen::Index>(c));
  return z;
}

}  // namespace

NnlsResult nnls(const std::vector<double>& a_col_major, std::size_t rows, std::size_t cols,
                const std::vector<double>& b_in, std::size_t max_iterations) {
  const Eigen::Map<const Eigen::MatrixXd> a(a_col_major.data(), static_cast<Eigen::Index>(rows),
                                            static_cast<Eigen::Index>(cols));
  const Eigen::Map<const Eigen::VectorXd> b(b_in.data(), static_cast<Eigen::Index>(rows));
  const Eigen::MatrixXd a_dense = a;
  const Eigen::VectorXd b_dense = b;
  if (max_iterations == 0) max_iterations = 3 * cols;

  NnlsResult result;
  Eigen::VectorXd x = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(cols));
  std::vector<bool> passive(cols, false);
  const double tol_w = 10.0 * std::numeric_limits<double>::epsilon() *
                       a_dense.cwiseAbs().colwise().sum().maxCoeff() *
                       static_cast<double>(std::max(rows, cols));

  Eigen::VectorXd w = a_dense.transpose() * (b_dense - a_dense * x);
  while (result.iterations < max_iterations) {
    Eigen::Index best = -1;
    double best_w = tol_w;
    for (Eigen::Index j = 0; j < w.size(); ++j) {
      if (!passive[static_cast<std::size_t>(j)] && w(j) > best_w) {
        best_w = w(j);
        best = j;
      }
    }
    if (best < 0) break;
    ++result.iterations;
    passive[static_cast<std::size_t>(best)] = true;

    Eigen::VectorXd z = solve_passive(a_dense, b_dense, passive);
    for (std::size_t inner = 0; inner < 3 * cols + 1; ++inner) {
      double alpha = std::numeric_limits<double>::infinity();
      for (std::size_t j = 0; j < cols; ++j) {
        const auto jj = static_cast<Eigen::Index>(j);
        if (!passive[j] || z(jj) > 0.0) continue;
        const double gap = x(jj) - z(jj);
        alpha = std::min(alpha, gap > 0.0 ? x(jj) / gap : 0.0);
      }
      if (!std::isfinite(alpha)) break;
      x += alpha * (z - x);
      for (std::size_t j = 0; j < cols; ++j) {
        const auto jj = static_cast<Eigen::Index>(j);
        if (passive[j] && x(jj) <= tol_w) {
          passive[j] = false;
          x(jj) = 0.0;
        }
      }
      z = solve_passive(a_dense, b_dense, passive);
    }
    x = z;
    w = a_dense.transpose() * (b_dense - a_dense * x);
  }
  result.hit_iteration_cap = result.iterations >= max_iterations;
  result.x.assign(x.data(), x.data() + x.size());
  for (double& v : result.x) v = std::max(v, 0.0);
  result.residual_norm = (a_dense * x - b_dense).norm();
  return result;
}

}  // namespace hyplap::detail
