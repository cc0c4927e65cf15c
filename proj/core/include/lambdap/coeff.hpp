#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace lambdap {

/// Index sets are sorted, duplicate-free lists of 0-based indices.
using IndexSet = std::vector<std::size_t>;

/// Dense coefficient vector on [0, n) with its support tracked.
class CoeffVector {
 public:
  CoeffVector() = default;
  explicit CoeffVector(std::size_t n) : entries_(n, 0.0) {}
  /// Takes ownership of dense entries; support = nonzero positions.
  explicit CoeffVector(std::vector<double> entries);
  /// Sparse constructor.  Throws std::invalid_argument if an index is out
  /// of range or repeated.
  CoeffVector(std::size_t n, const IndexSet& support, std::span<const double> values);

  std::size_t size() const noexcept { return entries_.size(); }
  std::span<const double> entries() const noexcept { return entries_; }
  double operator[](std::size_t i) const { return entries_[i]; }
  const IndexSet& support() const noexcept { return support_; }

  void set(std::size_t i, double v);

  /// Euclidean norm |a|.
  double norm() const;
  /// Membership in Pi_m: |a| <= 1 (+tol) and |supp a| <= m.
  bool in_pi(std::size_t m, double tol = 1e-12) const;
  CoeffVector normalized() const;

 private:
  void rebuild_support();

  std::vector<double> entries_;
  IndexSet support_;
};

/// Validates that `s` is sorted, unique and inside [0, n).
void check_index_set(const IndexSet& s, std::size_t n, const char* what);

}  // namespace lambdap
