#include <doctest.h>

#include <random>

#include "discgs/error.hpp"
#include "discgs/metrics.hpp"
#include "discgs/synth.hpp"
#include "discgs/worker.hpp"
#include "support.hpp"

using namespace discgs;

namespace {

ModelHyperParams hyper_for(const DataMatrix& data) { return {1.0, default_prior(data)}; }

// True when every block of `fine` lies inside one block of `coarse`.
bool is_coarsening(const Labels& fine, const Labels& coarse) {
  std::map<int, int> image;
  for (std::size_t i = 0; i < fine.size(); ++i) {
    const auto [it, inserted] = image.emplace(fine[i], coarse[i]);
    if (!inserted && it->second != coarse[i]) return false;
  }
  return true;
}

}  // namespace

TEST_CASE("a one-point shard always has one local cluster") {
  DataMatrix shard(1, 2);
  shard << 1.0, 2.0;
  NiwParams p;
  p.mu = Vector::Zero(2);
  p.nu = 3.0;
  p.psi = Matrix::Identity(2, 2);
  auto w = make_worker(0, 0, shard, {1.0, p});
  Rng rng(3);
  for (int i = 0; i < 3; ++i) {
    w = worker_sweep(std::move(w), rng);
    CHECK(w.local.num_clusters() == 1);
  }
  const auto s = summarize(w);
  REQUIRE(s.clusters.size() == 1);
  CHECK(s.clusters[0].size == 1);
}

TEST_CASE("worker recovers separated components on its shard") {
  const auto gen = generate_gmm(preset("synth-2-separated", 0));
  auto w = make_worker(0, 0, gen.data, hyper_for(gen.data));
  Rng rng(mix64(0));
  double best = 0.0;
  for (int i = 0; i < 20; ++i) {
    w = worker_sweep(std::move(w), rng);
    best = std::max(best, ari(w.local.labels, gen.labels));
  }
  CHECK(best == 1.0);
}

TEST_CASE("identical shards and streams give identical summaries") {
  const auto gen = generate_gmm(preset("synth-2-separated", 4));
  const auto hyper = hyper_for(gen.data);
  auto a = make_worker(3, 0, gen.data, hyper);
  auto b = make_worker(3, 0, gen.data, hyper);
  Rng ra(99);
  Rng rb(99);
  for (int i = 0; i < 3; ++i) {
    a = worker_sweep(std::move(a), ra);
    b = worker_sweep(std::move(b), rb);
  }
  const auto sa = summarize(a);
  const auto sb = summarize(b);
  REQUIRE(sa.clusters.size() == sb.clusters.size());
  for (std::size_t k = 0; k < sa.clusters.size(); ++k) {
    CHECK(sa.clusters[k].size == sb.clusters[k].size);
    CHECK(sa.clusters[k].stats == sb.clusters[k].stats);
  }
}

TEST_CASE("summaries") {
  std::mt19937_64 eng(6);
  const auto data = testing_support::to_matrix(testing_support::random_points(2, 40, eng));
  auto w = make_worker(1, 100, data, hyper_for(data));

  SUBCASE("one-cluster shard") {
    const auto s = summarize(w);
    CHECK(s.worker_id == 1);
    REQUIRE(s.clusters.size() == 1);
    CHECK(s.clusters[0].size == 40);
    CHECK(s.total_size() == 40);
  }
  SUBCASE("entries equal direct stats and merge back to the shard") {
    Rng rng(8);
    for (int i = 0; i < 4; ++i) w = worker_sweep(std::move(w), rng);
    const auto s = summarize(w);
    CHECK(s.total_size() == 40);
    std::vector<SufficientStats> parts;
    for (const auto& e : s.clusters) {
      std::vector<Vector> pts;
      for (std::size_t i = 0; i < w.local.labels.size(); ++i) {
        if (w.local.labels[i] == e.local_label) pts.push_back(data.row(static_cast<Eigen::Index>(i)).transpose());
      }
      const auto direct = stats_from_points(pts);
      CHECK(e.size == direct.count());
      CHECK((e.stats.sum() - direct.sum()).norm() <= 1e-10 * (1.0 + direct.sum().norm()));
      CHECK((e.stats.sum_outer() - direct.sum_outer()).norm() <= 1e-10 * (1.0 + direct.sum_outer().norm()));
      parts.push_back(e.stats);
    }
    const auto merged = stats_merge(parts);
    const auto whole = SufficientStats::from_points(data);
    CHECK(merged.count() == whole.count());
    CHECK((merged.sum_outer() - whole.sum_outer()).norm() <= 1e-10 * whole.sum_outer().norm());
  }
}

TEST_CASE("apply_global_labels") {
  DataMatrix data(6, 1);
  data << 0.0, 0.1, 5.0, 5.1, 9.0, 9.2;
  NiwParams p;
  p.mu = Vector::Zero(1);
  p.nu = 2.0;
  p.psi = Matrix::Identity(1, 1);
  const ModelHyperParams hyper{1.0, p};
  WorkerState w = make_worker(2, 0, data, hyper);
  w.local = state_from_labels(data, Labels{0, 0, 1, 1, 2, 2}, hyper);

  SUBCASE("identity map keeps the partition") {
    GlobalLabelMap map;
    for (int h = 0; h < 3; ++h) map.entries[{2, h}] = h;
    const auto out = apply_global_labels(w, map);
    CHECK(out.local.labels == w.local.labels);
    CHECK(out.local.clusters == w.local.clusters);
  }
  SUBCASE("two local clusters sharing a global id merge") {
    GlobalLabelMap map;
    map.entries[{2, 0}] = 7;
    map.entries[{2, 1}] = 3;
    map.entries[{2, 2}] = 7;
    const auto out = apply_global_labels(w, map);
    CHECK(out.local.num_clusters() == 2);
    // Dense local labels follow ascending global id: 3 -> 0, 7 -> 1.
    CHECK(out.local.labels == Labels{1, 1, 0, 0, 1, 1});
    const std::vector<SufficientStats> pair{w.local.clusters[0], w.local.clusters[2]};
    CHECK(out.local.clusters[1] == stats_merge(pair));
    CHECK_NOTHROW(check_consistency(out.local, &data, 1e-12));
    CHECK(is_coarsening(w.local.labels, out.local.labels));
  }
  SUBCASE("a missing entry is an error") {
    GlobalLabelMap map;
    map.entries[{2, 0}] = 0;
    map.entries[{2, 1}] = 0;
    CHECK_THROWS_AS(apply_global_labels(w, map), InvalidArgument);
  }
}

TEST_CASE("conservation and coarsening over sweep/summarize/apply cycles") {
  std::mt19937_64 eng(15);
  const auto data = testing_support::to_matrix(testing_support::random_points(2, 60, eng, 5.0));
  auto w = make_worker(0, 0, data, hyper_for(data));
  Rng rng(1);
  std::uniform_int_distribution<int> pick(0, 2);
  for (int it = 0; it < 10; ++it) {
    w = worker_sweep(std::move(w), rng);
    const auto s = summarize(w);
    CHECK(s.total_size() == 60);
    GlobalLabelMap map;
    for (const auto& e : s.clusters) map.entries[{0, e.local_label}] = pick(eng);
    const Labels before = w.local.labels;
    w = apply_global_labels(std::move(w), map);
    CHECK(is_coarsening(before, w.local.labels));
    CHECK_NOTHROW(check_consistency(w.local, &data, 1e-10));
  }
}
