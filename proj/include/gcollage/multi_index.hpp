#pragma once

#include <algorithm>
#include <cmath>
#include <compare>
#include <cstdint>
#include <initializer_list>
#include <span>
#include <vector>

namespace gcollage {

/// Integer multi-index. Used both for cell indices in Z^d and for Hermite
/// degrees in N_0^d; ordering is lexicographic.
class MultiIndex {
public:
  MultiIndex() = default;
  explicit MultiIndex(std::size_t d) : entries_(d, 0) {}
  MultiIndex(std::initializer_list<int> v) : entries_(v) {}
  explicit MultiIndex(std::vector<int> v) : entries_(std::move(v)) {}

  std::size_t dim() const noexcept { return entries_.size(); }
  int operator[](std::size_t i) const { return entries_[i]; }
  int &operator[](std::size_t i) { return entries_[i]; }
  std::span<const int> entries() const noexcept { return entries_; }

  auto begin() const noexcept { return entries_.begin(); }
  auto end() const noexcept { return entries_.end(); }

  /// Squared Euclidean norm.
  double norm2() const noexcept {
    double s = 0.0;
    for (int v : entries_) s += static_cast<double>(v) * v;
    return s;
  }
  double norm() const noexcept { return std::sqrt(norm2()); }

  std::int64_t max_abs() const noexcept {
    std::int64_t m = 0;
    for (int v : entries_) m = std::max<std::int64_t>(m, v < 0 ? -std::int64_t(v) : v);
    return m;
  }

  friend auto operator<=>(const MultiIndex &, const MultiIndex &) = default;
  friend bool operator==(const MultiIndex &, const MultiIndex &) = default;

private:
  std::vector<int> entries_;
};

} // namespace gcollage
