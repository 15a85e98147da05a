#pragma once

#include <cstdint>
#include <span>
#include <utility>
#include <vector>

namespace sciclass {

// Sparse feature vector over a fixed-size feature space. Entries are kept
// sorted by index; zero weights are never stored.
class SparseVector {
 public:
  using Entry = std::pair<std::uint32_t, double>;

  SparseVector() = default;
  explicit SparseVector(std::size_t dimension) : dimension_(dimension) {}

  // Entries must be sorted by index, index-unique, nonzero, in range.
  SparseVector(std::size_t dimension, std::vector<Entry> entries);

  std::size_t dimension() const { return dimension_; }
  const std::vector<Entry>& entries() const { return entries_; }
  bool empty() const { return entries_.empty(); }
  std::size_t nonzeros() const { return entries_.size(); }

  double norm() const;

  // Divides every weight by the current norm; no-op on the empty vector.
  void l2_normalize();

  bool operator==(const SparseVector&) const = default;

 private:
  std::size_t dimension_ = 0;
  std::vector<Entry> entries_;
};

// Dense-to-sparse conversion; exact zeros are dropped. Dimension equals
// values.size() regardless of how many survive.
SparseVector sparse_from_dense(std::span<const double> values);

}  // namespace sciclass
