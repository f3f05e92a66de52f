#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <utility>

#include "discgs/cluster_table.hpp"
#include "discgs/partition.hpp"
#include "discgs/rng.hpp"
#include "discgs/trace.hpp"

namespace discgs {

/// One collapsed Gibbs sweep over all observations in ascending index order.
/// Each observation is removed from its cluster (emptied clusters are
/// deleted), reseated by a categorical draw over existing clusters and a new
/// one using exactly one uniform, and reinserted. Labels are compacted at the
/// end of the sweep, preserving the relative order of surviving clusters.
///
/// NumericalDegeneracy errors are rethrown naming the observation index.
PartitionState cgs_sweep(PartitionState state, const DataMatrix& data, Rng& rng,
                         const WeightObserver& observer = {});

struct CgsOptions {
  /// Record ARI against these labels every iteration when set.
  std::optional<std::span<const int>> ground_truth;
};

/// Centralized sampler from the one-cluster partition for `iterations` sweeps.
std::pair<PartitionState, RunTrace> run_cgs(const DataMatrix& data, const ModelHyperParams& hyper,
                                            int iterations, std::uint64_t seed,
                                            const CgsOptions& options = {});

}  // namespace discgs
