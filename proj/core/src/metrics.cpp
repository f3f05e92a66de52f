#include "discgs/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <string>

#include "discgs/error.hpp"

namespace discgs {
namespace {

void check_lengths(std::span<const int> a, std::span<const int> b) {
  if (a.size() != b.size()) {
    throw InvalidArgument("label vectors differ in length: " + std::to_string(a.size()) +
                          " vs " + std::to_string(b.size()));
  }
}

std::vector<int> dense_codes(std::span<const int> labels, int& k) {
  std::map<int, int> code;
  for (int l : labels) code.emplace(l, 0);
  int next = 0;
  for (auto& [label, c] : code) c = next++;
  k = next;
  std::vector<int> out(labels.size());
  for (std::size_t i = 0; i < labels.size(); ++i) out[i] = code[labels[i]];
  return out;
}

double choose2(long x) { return 0.5 * static_cast<double>(x) * static_cast<double>(x - 1); }

double entropy(const std::vector<long>& sums, double n) {
  double h = 0.0;
  for (long c : sums) {
    if (c > 0) {
      const double p = static_cast<double>(c) / n;
      h -= p * std::log(p);
    }
  }
  return h;
}

}  // namespace

ContingencyTable::ContingencyTable(std::span<const int> a, std::span<const int> b) {
  check_lengths(a, b);
  int ka = 0;
  int kb = 0;
  const auto ca = dense_codes(a, ka);
  const auto cb = dense_codes(b, kb);
  n_ = static_cast<long>(a.size());
  counts_ = Eigen::Matrix<long, Eigen::Dynamic, Eigen::Dynamic>::Zero(ka, kb);
  for (std::size_t i = 0; i < ca.size(); ++i) ++counts_(ca[i], cb[i]);
  row_sums_.resize(static_cast<std::size_t>(ka));
  col_sums_.resize(static_cast<std::size_t>(kb));
  for (Eigen::Index i = 0; i < ka; ++i) row_sums_[static_cast<std::size_t>(i)] = counts_.row(i).sum();
  for (Eigen::Index j = 0; j < kb; ++j) col_sums_[static_cast<std::size_t>(j)] = counts_.col(j).sum();
}

double ari(std::span<const int> a, std::span<const int> b) {
  check_lengths(a, b);
  if (a.size() < 2) throw InvalidArgument("ARI needs at least 2 items");
  const ContingencyTable t(a, b);
  double index = 0.0;
  for (Eigen::Index i = 0; i < t.rows(); ++i) {
    for (Eigen::Index j = 0; j < t.cols(); ++j) index += choose2(t.count(i, j));
  }
  double sum_a = 0.0;
  double sum_b = 0.0;
  for (long c : t.row_sums()) sum_a += choose2(c);
  for (long c : t.col_sums()) sum_b += choose2(c);
  // Scaled by the pair count so small tables stay in exact integer arithmetic.
  const long double pairs = choose2(t.n());
  const long double num = pairs * index - static_cast<long double>(sum_a) * sum_b;
  const long double den = 0.5L * pairs * (sum_a + sum_b) - static_cast<long double>(sum_a) * sum_b;
  if (den == 0.0L) return 1.0;
  return static_cast<double>(num / den);
}

double nmi(std::span<const int> a, std::span<const int> b) {
  check_lengths(a, b);
  if (a.empty()) throw InvalidArgument("NMI needs at least 1 item");
  const ContingencyTable t(a, b);
  const double n = static_cast<double>(t.n());
  const double ha = entropy(t.row_sums(), n);
  const double hb = entropy(t.col_sums(), n);
  if (ha == 0.0 && hb == 0.0) return 1.0;
  double mi = 0.0;
  for (Eigen::Index i = 0; i < t.rows(); ++i) {
    for (Eigen::Index j = 0; j < t.cols(); ++j) {
      const long c = t.count(i, j);
      if (c == 0) continue;
      const double ra = static_cast<double>(t.row_sums()[static_cast<std::size_t>(i)]);
      const double cb = static_cast<double>(t.col_sums()[static_cast<std::size_t>(j)]);
      mi += (static_cast<double>(c) / n) * std::log(n * static_cast<double>(c) / (ra * cb));
    }
  }
  const double out = mi / (0.5 * (ha + hb));
  return std::clamp(out, 0.0, 1.0);
}

std::vector<int> max_weight_assignment(const Matrix& profit) {
  if (profit.rows() != profit.cols()) throw InvalidArgument("assignment needs a square matrix");
  const int m = static_cast<int>(profit.rows());
  if (m == 0) return {};
  const double top = profit.maxCoeff();
  // Shortest augmenting path with row/column potentials on cost = top - profit.
  const double inf = std::numeric_limits<double>::infinity();
  std::vector<double> u(m + 1, 0.0), v(m + 1, 0.0);
  std::vector<int> match_col(m + 1, 0), way(m + 1, 0);
  for (int i = 1; i <= m; ++i) {
    match_col[0] = i;
    int j0 = 0;
    std::vector<double> minv(m + 1, inf);
    std::vector<char> used(m + 1, 0);
    do {
      used[j0] = 1;
      const int i0 = match_col[j0];
      double delta = inf;
      int j1 = 0;
      for (int j = 1; j <= m; ++j) {
        if (used[j]) continue;
        const double cur = (top - profit(i0 - 1, j - 1)) - u[i0] - v[j];
        if (cur < minv[j]) {
          minv[j] = cur;
          way[j] = j0;
        }
        if (minv[j] < delta) {
          delta = minv[j];
          j1 = j;
        }
      }
      for (int j = 0; j <= m; ++j) {
        if (used[j]) {
          u[match_col[j]] += delta;
          v[j] -= delta;
        } else {
          minv[j] -= delta;
        }
      }
      j0 = j1;
    } while (match_col[j0] != 0);
    do {
      const int j1 = way[j0];
      match_col[j0] = match_col[j1];
      j0 = j1;
    } while (j0 != 0);
  }
  std::vector<int> row_to_col(static_cast<std::size_t>(m), -1);
  for (int j = 1; j <= m; ++j) row_to_col[static_cast<std::size_t>(match_col[j] - 1)] = j - 1;
  return row_to_col;
}

double acc(std::span<const int> predicted, std::span<const int> truth) {
  check_lengths(predicted, truth);
  if (predicted.empty()) throw InvalidArgument("ACC needs at least 1 item");
  const ContingencyTable t(predicted, truth);
  const Eigen::Index m = std::max(t.rows(), t.cols());
  Matrix profit = Matrix::Zero(m, m);
  profit.topLeftCorner(t.rows(), t.cols()) = t.counts().cast<double>();
  const auto assignment = max_weight_assignment(profit);
  double matched = 0.0;
  for (Eigen::Index i = 0; i < m; ++i) matched += profit(i, assignment[static_cast<std::size_t>(i)]);
  return matched / static_cast<double>(t.n());
}

int count_clusters(std::span<const int> labels) {
  std::vector<int> sorted(labels.begin(), labels.end());
  std::sort(sorted.begin(), sorted.end());
  return static_cast<int>(std::unique(sorted.begin(), sorted.end()) - sorted.begin());
}

ClusteringScores evaluate(std::span<const int> predicted, std::span<const int> truth) {
  ClusteringScores s;
  s.ari = ari(predicted, truth);
  s.nmi = nmi(predicted, truth);
  s.acc = acc(predicted, truth);
  s.num_clusters_pred = count_clusters(predicted);
  s.num_clusters_true = count_clusters(truth);
  return s;
}

}  // namespace discgs
