#pragma once

#include <cstdint>
#include <vector>

#include <Eigen/Dense>

namespace discgs {

using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;

/// Observations, one per row. Row-major so a point is contiguous in memory.
using DataMatrix = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

/// Cluster membership per observation; dense labels 0..K-1.
using Labels = std::vector<int>;

}  // namespace discgs
