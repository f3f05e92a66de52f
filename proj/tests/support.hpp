#pragma once

#include <random>
#include <vector>

#include "discgs/niw.hpp"
#include "discgs/sufficient_stats.hpp"
#include "oracles.hpp"

namespace testing_support {

using discgs::Matrix;
using discgs::NiwParams;
using discgs::Vector;

inline Matrix random_spd(Eigen::Index d, std::mt19937_64& eng, double scale = 1.0) {
  std::normal_distribution<double> normal(0.0, 1.0);
  Matrix a(d, d);
  for (Eigen::Index i = 0; i < d; ++i)
    for (Eigen::Index j = 0; j < d; ++j) a(i, j) = normal(eng);
  Matrix out = scale * (a * a.transpose() / static_cast<double>(d) + Matrix::Identity(d, d));
  return 0.5 * (out + out.transpose());
}

inline NiwParams random_prior(Eigen::Index d, std::mt19937_64& eng) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::normal_distribution<double> normal(0.0, 1.0);
  NiwParams p;
  p.mu = Vector(d);
  for (Eigen::Index i = 0; i < d; ++i) p.mu(i) = normal(eng);
  p.kappa = 0.2 + 2.0 * u(eng);
  p.nu = static_cast<double>(d) - 1.0 + 0.5 + 4.0 * u(eng);
  p.psi = random_spd(d, eng, 0.5 + u(eng));
  return p;
}

inline std::vector<Vector> random_points(Eigen::Index d, std::size_t n, std::mt19937_64& eng,
                                         double spread = 2.0) {
  std::normal_distribution<double> normal(0.0, spread);
  std::vector<Vector> out;
  for (std::size_t i = 0; i < n; ++i) {
    Vector x(d);
    for (Eigen::Index j = 0; j < d; ++j) x(j) = normal(eng);
    out.push_back(x);
  }
  return out;
}

inline oracle::Niw to_oracle(const NiwParams& p) { return {p.mu, p.kappa, p.nu, p.psi}; }

inline double rel_diff(double a, double b) {
  return std::abs(a - b) / std::max(1.0, std::max(std::abs(a), std::abs(b)));
}

inline discgs::DataMatrix to_matrix(const std::vector<Vector>& pts) {
  discgs::DataMatrix m(static_cast<Eigen::Index>(pts.size()), pts.empty() ? 0 : pts[0].size());
  for (std::size_t i = 0; i < pts.size(); ++i) m.row(static_cast<Eigen::Index>(i)) = pts[i].transpose();
  return m;
}

}  // namespace testing_support
