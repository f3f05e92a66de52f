#pragma once

#include <span>

#include "discgs/types.hpp"

namespace discgs {

/// Exact running sums (n, sum x, sum x x^T) of a set of d-dimensional points.
///
/// The mean T and centered scatter S are derived on demand. Keeping raw sums
/// makes point removal an exact subtraction instead of a rank-1 downdate of a
/// centered scatter. Merging is field-wise addition, hence commutative and
/// associative.
class SufficientStats {
 public:
  SufficientStats() = default;
  explicit SufficientStats(Eigen::Index dim);

  /// Builds stats from every row of `points`. Throws InvalidArgument on an
  /// empty matrix ("empty cluster").
  static SufficientStats from_points(const DataMatrix& points);
  static SufficientStats from_point(const Eigen::Ref<const Vector>& x);

  Eigen::Index dim() const noexcept { return sum_.size(); }
  long count() const noexcept { return n_; }
  bool empty() const noexcept { return n_ == 0; }
  const Vector& sum() const noexcept { return sum_; }
  const Matrix& sum_outer() const noexcept { return sum_outer_; }

  /// T = sum / n. Requires n >= 1.
  Vector mean() const;
  /// S = sum_outer - n T T^T, symmetrized. Zero for n <= 1.
  Matrix scatter() const;

  void add_point(const Eigen::Ref<const Vector>& x);
  /// Throws InvalidArgument when n == 0. Removing the last point resets the
  /// sums to exact zeros.
  void remove_point(const Eigen::Ref<const Vector>& x);

  SufficientStats& operator+=(const SufficientStats& other);
  /// Subtracts a previously merged part; throws if counts would go negative.
  SufficientStats& operator-=(const SufficientStats& other);

  friend bool operator==(const SufficientStats&, const SufficientStats&) = default;

 private:
  void check_dim(Eigen::Index d) const;

  long n_ = 0;
  Vector sum_;
  Matrix sum_outer_;
};

SufficientStats operator+(SufficientStats lhs, const SufficientStats& rhs);

/// Stats of the given points; throws on empty input or inconsistent dimensions.
SufficientStats stats_from_points(std::span<const Vector> points);
SufficientStats stats_add_point(SufficientStats s, const Eigen::Ref<const Vector>& x);
SufficientStats stats_remove_point(SufficientStats s, const Eigen::Ref<const Vector>& x);

/// Field-wise sum of all parts; throws on an empty list or dimension mismatch.
SufficientStats stats_merge(std::span<const SufficientStats> parts);

}  // namespace discgs
