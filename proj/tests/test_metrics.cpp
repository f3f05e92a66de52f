#include <doctest.h>

#include <random>

#include "discgs/error.hpp"
#include "discgs/metrics.hpp"
#include "oracles.hpp"

using namespace discgs;

namespace {
std::vector<int> random_labels(std::size_t n, int k, std::mt19937_64& eng) {
  std::uniform_int_distribution<int> pick(0, k - 1);
  std::vector<int> out(n);
  for (auto& l : out) l = pick(eng);
  return out;
}

std::vector<int> permuted(const std::vector<int>& labels, int offset) {
  std::vector<int> out;
  for (int l : labels) out.push_back(100 - 7 * l + offset);
  return out;
}
}  // namespace

TEST_CASE("ARI hand values") {
  const std::vector<int> a{0, 0, 1, 1};
  CHECK(ari(a, a) == 1.0);
  CHECK(ari(a, std::vector<int>{1, 1, 0, 0}) == 1.0);
  CHECK(ari(a, std::vector<int>{0, 1, 0, 1}) == -0.5);
  CHECK_THROWS_AS(ari(a, std::vector<int>{0, 1}), InvalidArgument);
  CHECK_THROWS_AS(ari(std::vector<int>{0}, std::vector<int>{0}), InvalidArgument);
}

TEST_CASE("NMI hand values") {
  const std::vector<int> a{0, 0, 1, 1};
  CHECK(nmi(a, a) == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(nmi(a, std::vector<int>{0, 1, 0, 1}) == 0.0);
  CHECK(nmi(std::vector<int>{3, 3, 3}, std::vector<int>{1, 1, 1}) == 1.0);
  CHECK(nmi(std::vector<int>{0, 0, 0, 0}, a) == 0.0);
  CHECK_THROWS_AS(nmi(a, std::vector<int>{0}), InvalidArgument);
}

TEST_CASE("ACC hand values") {
  const std::vector<int> a{0, 0, 1, 1};
  CHECK(acc(a, a) == 1.0);
  CHECK(acc(a, std::vector<int>{1, 1, 0, 0}) == 1.0);
  CHECK(acc(std::vector<int>{0, 0, 0, 1}, std::vector<int>{0, 0, 1, 1}) == 0.75);
  // More predicted clusters than true ones.
  CHECK(acc(std::vector<int>{0, 1, 2, 3}, std::vector<int>{0, 0, 1, 1}) == 0.5);
  CHECK_THROWS_AS(acc(a, std::vector<int>{0}), InvalidArgument);
}

TEST_CASE("contingency table marginals") {
  const std::vector<int> a{5, 5, 9, 9, 9};
  const std::vector<int> b{0, 1, 1, 1, 2};
  const ContingencyTable t(a, b);
  CHECK(t.n() == 5);
  CHECK(t.rows() == 2);
  CHECK(t.cols() == 3);
  CHECK(t.row_sums() == std::vector<long>{2, 3});
  CHECK(t.col_sums() == std::vector<long>{1, 3, 1});
  CHECK(t.count(1, 1) == 2);
}

TEST_CASE("metrics are relabeling invariant and ARI/NMI symmetric") {
  std::mt19937_64 eng(9);
  for (int trial = 0; trial < 100; ++trial) {
    const std::size_t n = 2 + static_cast<std::size_t>(trial % 30);
    const auto a = random_labels(n, 1 + trial % 5, eng);
    const auto b = random_labels(n, 1 + trial % 4, eng);
    const auto pa = permuted(a, trial);
    CHECK(ari(a, b) == doctest::Approx(ari(pa, b)).epsilon(1e-12));
    CHECK(nmi(a, b) == doctest::Approx(nmi(pa, b)).epsilon(1e-12));
    CHECK(acc(a, b) == doctest::Approx(acc(pa, b)).epsilon(1e-12));
    CHECK(ari(a, b) == doctest::Approx(ari(b, a)).epsilon(1e-12));
    CHECK(nmi(a, b) == doctest::Approx(nmi(b, a)).epsilon(1e-12));
    CHECK(ari(a, b) == doctest::Approx(oracle::ari_pairs(a, b)).epsilon(1e-12));
    const double v = nmi(a, b);
    CHECK(v >= 0.0);
    CHECK(v <= 1.0);
  }
}

TEST_CASE("ACC equals brute-force matching and is symmetric") {
  std::mt19937_64 eng(10);
  for (int trial = 0; trial < 100; ++trial) {
    const std::size_t n = 1 + static_cast<std::size_t>(trial % 12);
    const auto pred = random_labels(n, 1 + trial % 5, eng);
    const auto truth = random_labels(n, 1 + (trial / 5) % 5, eng);
    const ContingencyTable t(pred, truth);
    std::vector<std::vector<long>> counts(static_cast<std::size_t>(t.rows()),
                                          std::vector<long>(static_cast<std::size_t>(t.cols())));
    for (Eigen::Index i = 0; i < t.rows(); ++i)
      for (Eigen::Index j = 0; j < t.cols(); ++j)
        counts[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] = t.count(i, j);
    const double brute = static_cast<double>(oracle::best_matching(counts)) / static_cast<double>(n);
    CHECK(acc(pred, truth) == doctest::Approx(brute).epsilon(1e-15));
    CHECK(acc(truth, pred) == doctest::Approx(brute).epsilon(1e-15));
  }
}

TEST_CASE("Hungarian assignment matches permutation search") {
  std::mt19937_64 eng(12);
  std::uniform_int_distribution<int> cell(0, 20);
  for (int trial = 0; trial < 100; ++trial) {
    const int k = 1 + trial % 6;
    std::vector<std::vector<long>> counts(static_cast<std::size_t>(k), std::vector<long>(static_cast<std::size_t>(k)));
    Matrix profit(k, k);
    for (int i = 0; i < k; ++i)
      for (int j = 0; j < k; ++j) {
        counts[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] = cell(eng);
        profit(i, j) = static_cast<double>(counts[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)]);
      }
    const auto assignment = max_weight_assignment(profit);
    double total = 0.0;
    std::vector<int> used(static_cast<std::size_t>(k), 0);
    for (int i = 0; i < k; ++i) {
      total += profit(i, assignment[static_cast<std::size_t>(i)]);
      ++used[static_cast<std::size_t>(assignment[static_cast<std::size_t>(i)])];
    }
    CHECK(std::all_of(used.begin(), used.end(), [](int u) { return u == 1; }));
    CHECK(total == static_cast<double>(oracle::best_matching(counts)));
  }
}

TEST_CASE("evaluate bundles all scores") {
  const std::vector<int> pred{0, 0, 1, 2};
  const std::vector<int> truth{1, 1, 0, 0};
  const auto s = evaluate(pred, truth);
  CHECK(s.num_clusters_pred == 3);
  CHECK(s.num_clusters_true == 2);
  CHECK(s.acc == 0.75);
  CHECK(s.ari == doctest::Approx(ari(pred, truth)));
}
