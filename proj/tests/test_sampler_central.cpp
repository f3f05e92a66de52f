#include <doctest.h>

#include <cmath>
#include <random>

#include "discgs/categorical.hpp"
#include "discgs/central.hpp"
#include "discgs/error.hpp"
#include "discgs/metrics.hpp"
#include "discgs/synth.hpp"
#include "support.hpp"

using namespace discgs;

namespace {

ModelHyperParams hyper_for(const DataMatrix& data, double alpha = 1.0) {
  return {alpha, default_prior(data)};
}

ModelHyperParams unit_hyper(Eigen::Index d, double alpha) {
  NiwParams p;
  p.mu = Vector::Zero(d);
  p.kappa = 1.0;
  p.nu = static_cast<double>(d) + 1.0;
  p.psi = Matrix::Identity(d, d);
  return {alpha, p};
}

}  // namespace

TEST_CASE("log_sum_exp and categorical draws") {
  const std::vector<double> w{std::log(1.0), std::log(3.0)};
  CHECK(log_sum_exp(w) == doctest::Approx(std::log(4.0)));
  CHECK(sample_log_categorical(w, 0.0) == 0);
  CHECK(sample_log_categorical(w, 0.2499) == 0);
  CHECK(sample_log_categorical(w, 0.2501) == 1);
  CHECK(sample_log_categorical(w, 0.999999999) == 1);
  const std::vector<double> shifted{1000.0, 1000.0 + std::log(3.0)};
  CHECK(sample_log_categorical(shifted, 0.2501) == 1);
  CHECK_THROWS_AS(sample_log_categorical(std::vector<double>{}, 0.5), InvalidArgument);
}

TEST_CASE("a single observation always ends in one cluster") {
  DataMatrix data(1, 2);
  data << 0.3, -1.2;
  auto state = one_cluster_state(data, unit_hyper(2, 1.0));
  Rng rng(1);
  for (int i = 0; i < 5; ++i) {
    state = cgs_sweep(std::move(state), data, rng);
    CHECK(state.num_clusters() == 1);
    CHECK(state.labels == Labels{0});
  }
}

TEST_CASE("two identical points join up when alpha is tiny") {
  DataMatrix data(2, 1);
  data << 0.5, 0.5;
  const auto hyper = unit_hyper(1, 1e-8);
  // After removing point 0 its old cluster vanishes: join {x1} or open a new one.
  const auto x = SufficientStats::from_point(data.row(0).transpose());
  const double join = std::log(1.0) + log_posterior_predictive(x, x, hyper.g0);
  const double open = std::log(1e-8) + log_prior_predictive(x, hyper.g0);
  const double p_join_first = 1.0 / (1.0 + std::exp(open - join));
  CHECK(p_join_first > 0.99);

  int together = 0;
  const int runs = 2000;
  for (int seed = 0; seed < runs; ++seed) {
    auto state = state_from_labels(data, Labels{0, 1}, hyper);
    Rng rng(static_cast<std::uint64_t>(seed));
    state = cgs_sweep(std::move(state), data, rng);
    together += state.labels[0] == state.labels[1];
  }
  CHECK(static_cast<double>(together) / runs > 0.99);
}

TEST_CASE("sweeps are deterministic per seed and keep the state consistent") {
  const auto gen = generate_gmm(preset("synth-2-separated", 3));
  const auto hyper = hyper_for(gen.data);
  auto a = one_cluster_state(gen.data, hyper);
  auto b = a;
  Rng ra(42);
  Rng rb(42);
  for (int i = 0; i < 5; ++i) {
    a = cgs_sweep(std::move(a), gen.data, ra);
    b = cgs_sweep(std::move(b), gen.data, rb);
    CHECK(a.labels == b.labels);
    CHECK_NOTHROW(check_consistency(a, &gen.data, 1e-10));
    long total = 0;
    for (const auto& c : a.clusters) total += c.count();
    CHECK(total == gen.data.rows());
  }
}

TEST_CASE("observer sees K + 1 weights per observation in index order") {
  std::mt19937_64 eng(2);
  const auto data = testing_support::to_matrix(testing_support::random_points(2, 30, eng));
  auto state = one_cluster_state(data, hyper_for(data));
  Rng rng(5);
  std::size_t expected_item = 0;
  state = cgs_sweep(std::move(state), data, rng, [&](std::size_t item, std::span<const double> w) {
    CHECK(item == expected_item++);
    CHECK(w.size() >= 1);
  });
  CHECK(expected_item == 30);
}

TEST_CASE("run_cgs recovers two well separated components") {
  const auto gen = generate_gmm(preset("synth-2-separated", 0));
  const auto hyper = hyper_for(gen.data);
  CHECK_THROWS_AS(run_cgs(gen.data, hyper, 0, 1), InvalidArgument);

  CgsOptions opts;
  opts.ground_truth = std::span<const int>(gen.labels);
  const auto [state, trace] = run_cgs(gen.data, hyper, 50, 0, opts);
  CHECK(trace.size() == 50);
  CHECK(ari(state.labels, gen.labels) == 1.0);
  CHECK(trace.back().ari.value() == 1.0);
  CHECK(trace.back().num_clusters == 2);
  for (std::size_t t = 0; t < trace.size(); ++t) CHECK(trace[t].iteration == static_cast<int>(t) + 1);
  CHECK(moving_average_log_joint(trace, 30) > moving_average_log_joint(trace, 1));
}

TEST_CASE("separated components are never merged across seeds") {
  // The heavy-tailed new-cluster predictive occasionally parks a tail point
  // in a transient singleton, so exact recovery is not guaranteed at every
  // iteration; clusters must still be pure.
  for (std::uint64_t seed = 1; seed <= 10; ++seed) {
    const auto gen = generate_gmm(preset("synth-2-separated", seed));
    const auto [state, trace] = run_cgs(gen.data, hyper_for(gen.data), 50, seed);
    CHECK(ari(state.labels, gen.labels) >= 0.98);
    std::vector<int> owner(state.num_clusters(), -1);
    for (std::size_t i = 0; i < state.labels.size(); ++i) {
      auto& o = owner[static_cast<std::size_t>(state.labels[i])];
      if (o < 0) o = gen.labels[i];
      CHECK(o == gen.labels[i]);
    }
  }
}

TEST_CASE("log_joint") {
  std::mt19937_64 eng(13);
  SUBCASE("a single point reduces to its prior predictive") {
    DataMatrix data(1, 2);
    data << 1.0, -2.0;
    const auto hyper = unit_hyper(2, 0.7);
    const auto state = one_cluster_state(data, hyper);
    CHECK(log_joint(state) ==
          doctest::Approx(log_prior_predictive(state.clusters[0], hyper.g0)).epsilon(1e-12));
  }
  SUBCASE("global relabeling does not change it") {
    const auto data = testing_support::to_matrix(testing_support::random_points(3, 25, eng));
    Labels labels(25);
    std::uniform_int_distribution<int> pick(0, 3);
    for (auto& l : labels) l = pick(eng);
    labels = canonical_labels(labels);
    const auto hyper = hyper_for(data, 1.3);
    const auto state = state_from_labels(data, labels, hyper);
    const int k = static_cast<int>(state.num_clusters());
    Labels flipped = labels;
    for (auto& l : flipped) l = k - 1 - l;
    CHECK(log_joint(state_from_labels(data, flipped, hyper)) ==
          doctest::Approx(log_joint(state)).epsilon(1e-12));
  }
  SUBCASE("normalizes to the enumerated posterior for n = 3") {
    const auto pts = testing_support::random_points(1, 3, eng);
    const auto data = testing_support::to_matrix(pts);
    const auto hyper = unit_hyper(1, 0.9);
    const auto partitions = oracle::set_partitions(3);
    REQUIRE(partitions.size() == 5);
    std::vector<double> lib, ref;
    for (const auto& z : partitions) {
      lib.push_back(log_joint(state_from_labels(data, z, hyper)));
      ref.push_back(oracle::log_joint_enumerated(pts, z, hyper.alpha, testing_support::to_oracle(hyper.g0)));
    }
    const double lib_norm = oracle::log_sum_exp(lib);
    const double ref_norm = oracle::log_sum_exp(ref);
    for (std::size_t i = 0; i < partitions.size(); ++i) {
      CHECK(lib[i] - lib_norm == doctest::Approx(ref[i] - ref_norm).epsilon(1e-10));
      CHECK(lib[i] == doctest::Approx(ref[i]).epsilon(1e-10));
    }
  }
}

TEST_CASE("state construction and consistency checks") {
  DataMatrix data(3, 1);
  data << 0.0, 1.0, 2.0;
  const auto hyper = unit_hyper(1, 1.0);
  CHECK_THROWS_AS(state_from_labels(data, Labels{0, 2, 2}, hyper), InvalidArgument);
  CHECK_THROWS_AS(state_from_labels(data, Labels{0, 1}, hyper), InvalidArgument);
  auto state = state_from_labels(data, Labels{1, 0, 1}, hyper);
  CHECK(state.clusters[1].count() == 2);
  state.clusters[1].add_point(Vector::Constant(1, 9.0));
  CHECK_THROWS_AS(check_consistency(state), InvalidArgument);
  CHECK(canonical_labels(std::vector<int>{7, 7, 3, 9, 3}) == Labels{0, 0, 1, 2, 1});
}
