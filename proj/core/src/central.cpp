#include "discgs/central.hpp"

#include <chrono>
#include <string>

#include "discgs/categorical.hpp"
#include "discgs/error.hpp"
#include "discgs/metrics.hpp"

namespace discgs {

double moving_average_log_joint(const RunTrace& trace, int t, int window) {
  if (t < 1 || static_cast<std::size_t>(t) > trace.size() || window < 1) {
    throw InvalidArgument("moving average outside the trace");
  }
  const int first = std::max(1, t - window + 1);
  double acc = 0.0;
  for (int i = first; i <= t; ++i) acc += trace[static_cast<std::size_t>(i - 1)].log_joint;
  return acc / static_cast<double>(t - first + 1);
}

PartitionState cgs_sweep(PartitionState state, const DataMatrix& data, Rng& rng,
                         const WeightObserver& observer) {
  const auto n = static_cast<std::size_t>(data.rows());
  if (state.labels.size() != n) {
    throw InvalidArgument("partition state does not match the data");
  }
  ClusterTable table(state.hyper, data.cols());
  for (const auto& s : state.clusters) table.open(s);

  // Labels hold table slots during the sweep; slot k == label k initially.
  auto& slots = state.labels;
  std::vector<double> weights;
  std::size_t i = 0;
  try {
    for (; i < n; ++i) {
      const auto x = data.row(static_cast<Eigen::Index>(i)).transpose();
      table.remove_point(slots[i], x);
      table.point_log_weights(x, weights);
      if (observer) observer(i, weights);
      const int slot = table.slot_for_choice(sample_log_categorical(weights, uniform01(rng)));
      if (slot < 0) {
        slots[i] = table.open(SufficientStats::from_point(x));
      } else {
        table.add_point(slot, x);
        slots[i] = slot;
      }
    }
  } catch (const NumericalDegeneracy& e) {
    throw e.with_context("observation " + std::to_string(i));
  }

  const auto dense = table.dense_labels();
  for (auto& l : slots) l = dense[static_cast<std::size_t>(l)];
  state.clusters = table.dense_stats();
  return state;
}

std::pair<PartitionState, RunTrace> run_cgs(const DataMatrix& data, const ModelHyperParams& hyper,
                                            int iterations, std::uint64_t seed,
                                            const CgsOptions& options) {
  if (iterations < 1) throw InvalidArgument("iterations must be >= 1");
  if (data.rows() < 1) throw InvalidArgument("no observations");
  hyper.validate();
  if (hyper.g0.dim() != data.cols()) throw InvalidArgument("prior dimension does not match data");
  if (options.ground_truth && options.ground_truth->size() != static_cast<std::size_t>(data.rows())) {
    throw InvalidArgument("ground truth length does not match the data");
  }

  Rng rng(mix64(seed));
  PartitionState state = one_cluster_state(data, hyper);
  RunTrace trace;
  trace.reserve(static_cast<std::size_t>(iterations));
  for (int t = 1; t <= iterations; ++t) {
    const auto start = std::chrono::steady_clock::now();
    try {
      state = cgs_sweep(std::move(state), data, rng);
    } catch (const NumericalDegeneracy& e) {
      throw e.with_context("iteration " + std::to_string(t));
    }
    const double elapsed =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    IterationRecord rec;
    rec.iteration = t;
    rec.log_joint = log_joint(state);
    rec.num_clusters = static_cast<int>(state.num_clusters());
    rec.wall_seconds = elapsed;
    if (options.ground_truth && state.size() >= 2) rec.ari = ari(state.labels, *options.ground_truth);
    trace.push_back(rec);
  }
  return {std::move(state), std::move(trace)};
}

}  // namespace discgs
