#include "sciclass/sparse.hpp"

#include <cmath>
#include <stdexcept>

namespace sciclass {

SparseVector::SparseVector(std::size_t dimension, std::vector<Entry> entries)
    : dimension_(dimension), entries_(std::move(entries)) {
  std::uint32_t prev = 0;
  bool first = true;
  for (const Entry& e : entries_) {
    if (e.first >= dimension_)
      throw std::invalid_argument("sparse index out of range");
    if (!first && e.first <= prev)
      throw std::invalid_argument("sparse indices not strictly increasing");
    if (e.second == 0.0)
      throw std::invalid_argument("explicit zero weight in sparse vector");
    prev = e.first;
    first = false;
  }
}

double SparseVector::norm() const {
  double sum = 0.0;
  for (const Entry& e : entries_) sum += e.second * e.second;
  return std::sqrt(sum);
}

void SparseVector::l2_normalize() {
  const double n = norm();
  if (n == 0.0) return;
  for (Entry& e : entries_) e.second /= n;
}

SparseVector sparse_from_dense(std::span<const double> values) {
  std::vector<SparseVector::Entry> entries;
  entries.reserve(values.size());
  for (std::size_t i = 0; i < values.size(); ++i)
    if (values[i] != 0.0)
      entries.emplace_back(static_cast<std::uint32_t>(i), values[i]);
  return SparseVector(values.size(), std::move(entries));
}

}  // namespace sciclass
