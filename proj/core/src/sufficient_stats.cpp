#include "discgs/sufficient_stats.hpp"

#include <string>

#include "discgs/error.hpp"

namespace discgs {

SufficientStats::SufficientStats(Eigen::Index dim)
    : sum_(Vector::Zero(dim)), sum_outer_(Matrix::Zero(dim, dim)) {
  if (dim < 1) throw InvalidArgument("sufficient stats need dimension >= 1");
}

SufficientStats SufficientStats::from_points(const DataMatrix& points) {
  if (points.rows() == 0) throw InvalidArgument("empty cluster");
  SufficientStats s(points.cols());
  for (Eigen::Index i = 0; i < points.rows(); ++i) s.add_point(points.row(i).transpose());
  return s;
}

SufficientStats SufficientStats::from_point(const Eigen::Ref<const Vector>& x) {
  SufficientStats s(x.size());
  s.add_point(x);
  return s;
}

void SufficientStats::check_dim(Eigen::Index d) const {
  if (d != dim()) {
    throw InvalidArgument("dimension mismatch: stats have d=" + std::to_string(dim()) +
                          ", got d=" + std::to_string(d));
  }
}

Vector SufficientStats::mean() const {
  if (n_ == 0) throw InvalidArgument("mean of empty stats");
  return sum_ / static_cast<double>(n_);
}

Matrix SufficientStats::scatter() const {
  if (n_ <= 1) return Matrix::Zero(dim(), dim());
  Matrix s = sum_outer_ - (sum_ * sum_.transpose()) / static_cast<double>(n_);
  return 0.5 * (s + s.transpose());
}

void SufficientStats::add_point(const Eigen::Ref<const Vector>& x) {
  check_dim(x.size());
  ++n_;
  sum_ += x;
  sum_outer_.noalias() += x * x.transpose();
}

void SufficientStats::remove_point(const Eigen::Ref<const Vector>& x) {
  check_dim(x.size());
  if (n_ == 0) throw InvalidArgument("cannot remove a point from empty stats");
  if (--n_ == 0) {
    sum_.setZero();
    sum_outer_.setZero();
    return;
  }
  sum_ -= x;
  sum_outer_.noalias() -= x * x.transpose();
}

SufficientStats& SufficientStats::operator+=(const SufficientStats& other) {
  check_dim(other.dim());
  n_ += other.n_;
  sum_ += other.sum_;
  sum_outer_ += other.sum_outer_;
  return *this;
}

SufficientStats& SufficientStats::operator-=(const SufficientStats& other) {
  check_dim(other.dim());
  if (other.n_ > n_) throw InvalidArgument("cannot subtract more points than present");
  n_ -= other.n_;
  if (n_ == 0) {
    sum_.setZero();
    sum_outer_.setZero();
    return *this;
  }
  sum_ -= other.sum_;
  sum_outer_ -= other.sum_outer_;
  return *this;
}

SufficientStats operator+(SufficientStats lhs, const SufficientStats& rhs) {
  lhs += rhs;
  return lhs;
}

SufficientStats stats_from_points(std::span<const Vector> points) {
  if (points.empty()) throw InvalidArgument("empty cluster");
  SufficientStats s(points.front().size());
  for (const auto& x : points) s.add_point(x);
  return s;
}

SufficientStats stats_add_point(SufficientStats s, const Eigen::Ref<const Vector>& x) {
  s.add_point(x);
  return s;
}

SufficientStats stats_remove_point(SufficientStats s, const Eigen::Ref<const Vector>& x) {
  s.remove_point(x);
  return s;
}

SufficientStats stats_merge(std::span<const SufficientStats> parts) {
  if (parts.empty()) throw InvalidArgument("stats_merge needs at least one part");
  SufficientStats out = parts.front();
  for (std::size_t i = 1; i < parts.size(); ++i) out += parts[i];
  return out;
}

}  // namespace discgs
