#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <utility>
#include <vector>

#include "hyplap/hypergraph.hpp"

namespace hyplap {

// One real value per vertex.
using VertexFunction = std::vector<double>;

// Dirichlet data: labeled vertex set L with boundary values y_i.
class Labeling {
 public:
  struct Entry {
    VertexId vertex;
    double value;
    friend bool operator==(const Entry&, const Entry&) = default;
  };

  // Throws ValidationError when empty, on duplicate or out-of-range ids, and
  // on non-finite values. Entries are kept sorted by vertex id.
  Labeling(std::size_t num_vertices, std::vector<Entry> entries);

  std::size_t num_vertices() const noexcept { return mask_.size(); }
  std::size_t size() const noexcept { return entries_.size(); }
  std::span<const Entry> entries() const noexcept { return entries_; }

  bool is_labeled(VertexId i) const noexcept { return mask_[i]; }
  const std::vector<bool>& mask() const noexcept { return mask_; }
  std::optional<double> value(VertexId i) const;

  double min_value() const noexcept { return min_; }
  double max_value() const noexcept { return max_; }
  double range() const noexcept { return max_ - min_; }

  // Overwrites labeled entries of u with their boundary values.
  void impose(std::span<double> u) const noexcept;
  // True iff |u(x_i) - y_i| <= tol on L.
  bool matches(std::span<const double> u, double tol) const noexcept;

  // Unlabeled vertex ids, ascending.
  std::vector<VertexId> unlabeled() const;

  friend bool operator==(const Labeling&, const Labeling&) = default;

 private:
  std::vector<Entry> entries_;
  std::vector<bool> mask_;
  double min_ = 0.0;
  double max_ = 0.0;
};

}  // namespace hyplap
