#pragma once

#include <span>
#include <vector>

#include "discgs/types.hpp"

namespace discgs {

/// Co-occurrence counts of two labelings of the same n items. Labels may be
/// arbitrary integers; rows and columns follow ascending label value.
class ContingencyTable {
 public:
  ContingencyTable(std::span<const int> a, std::span<const int> b);

  long n() const noexcept { return n_; }
  Eigen::Index rows() const noexcept { return counts_.rows(); }
  Eigen::Index cols() const noexcept { return counts_.cols(); }
  long count(Eigen::Index i, Eigen::Index j) const { return counts_(i, j); }
  const Eigen::Matrix<long, Eigen::Dynamic, Eigen::Dynamic>& counts() const noexcept {
    return counts_;
  }
  const std::vector<long>& row_sums() const noexcept { return row_sums_; }
  const std::vector<long>& col_sums() const noexcept { return col_sums_; }

 private:
  long n_ = 0;
  Eigen::Matrix<long, Eigen::Dynamic, Eigen::Dynamic> counts_;
  std::vector<long> row_sums_;
  std::vector<long> col_sums_;
};

/// Adjusted Rand index. Needs n >= 2. When both labelings are trivial in the
/// same way (the expected and maximum index coincide) the result is 1.
double ari(std::span<const int> a, std::span<const int> b);

/// Normalized mutual information, natural logs, arithmetic-mean
/// normalization. Two single-cluster labelings score 1.
double nmi(std::span<const int> a, std::span<const int> b);

/// Clustering accuracy: the best one-to-one matching of predicted to true
/// labels, solved exactly on the zero-padded square contingency table.
double acc(std::span<const int> predicted, std::span<const int> truth);

/// Maximum-profit perfect matching on a square matrix (Hungarian method).
/// Returns, for each row, the column assigned to it.
std::vector<int> max_weight_assignment(const Matrix& profit);

struct ClusteringScores {
  double ari = 0.0;
  double nmi = 0.0;
  double acc = 0.0;
  int num_clusters_pred = 0;
  int num_clusters_true = 0;
};

ClusteringScores evaluate(std::span<const int> predicted, std::span<const int> truth);

/// Number of distinct labels.
int count_clusters(std::span<const int> labels);

}  // namespace discgs
