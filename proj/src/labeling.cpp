#include "hyplap/labeling.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "hyplap/errors.hpp"

namespace hyplap {

Labeling::Labeling(std::size_t num_vertices, std::vector<Entry> entries)
    : entries_(std::move(entries)), mask_(num_vertices, false) {
  if (entries_.empty()) throw ValidationError("labeling needs at least one labeled vertex");
  std::sort(entries_.begin(), entries_.end(),
            [](const Entry& a, const Entry& b) { return a.vertex < b.vertex; });
  min_ = entries_.front().value;
  max_ = entries_.front().value;
  for (const Entry& e : entries_) {
    if (e.vertex >= num_vertices) {
      throw ValidationError("labeled vertex " + std::to_string(e.vertex) + " out of range");
    }
    if (mask_[e.vertex]) {
      throw ValidationError("vertex " + std::to_string(e.vertex) + " labeled twice");
    }
    if (!std::isfinite(e.value)) {
      throw ValidationError("label of vertex " + std::to_string(e.vertex) + " is not finite");
    }
    mask_[e.vertex] = true;
    min_ = std::min(min_, e.value);
    max_ = std::max(max_, e.value);
  }
}

std::optional<double> Labeling::value(VertexId i) const {
  auto it = std::lower_bound(entries_.begin(), entries_.end(), i,
                             [](const Entry& e, VertexId v) { return e.vertex < v; });
  if (it == entries_.end() || it->vertex != i) return std::nullopt;
  return it->value;
}

void Labeling::impose(std::span<double> u) const noexcept {
  for (const Entry& e : entries_) u[e.vertex] = e.value;
}

bool Labeling::matches(std::span<const double> u, double tol) const noexcept {
  return std::all_of(entries_.begin(), entries_.end(), [&](const Entry& e) {
    return std::abs(u[e.vertex] - e.value) <= tol;
  });
}

std::vector<VertexId> Labeling::unlabeled() const {
  std::vector<VertexId> out;
  out.reserve(mask_.size() - entries_.size());
  for (VertexId i = 0; i < mask_.size(); ++i) {
    if (!mask_[i]) out.push_back(i);
  }
  return out;
}

}  // namespace hyplap
