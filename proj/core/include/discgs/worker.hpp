#pragma once

#include <cstddef>

#include "discgs/cluster_table.hpp"
#include "discgs/messages.hpp"
#include "discgs/partition.hpp"
#include "discgs/rng.hpp"

namespace discgs {

/// A worker's private shard and its local partition.
struct WorkerState {
  int worker_id = 0;
  /// Global index of the shard's first row; shard row i is observation
  /// `offset + i`.
  std::size_t offset = 0;
  DataMatrix shard;
  PartitionState local;
};

/// Worker whose whole shard forms one local cluster.
WorkerState make_worker(int worker_id, std::size_t offset, DataMatrix shard,
                        const ModelHyperParams& hyper);

/// One local collapsed Gibbs sweep over the shard under the global prior and
/// concentration; same contract as cgs_sweep. Errors name the worker.
WorkerState worker_sweep(WorkerState w, Rng& rng, const WeightObserver& observer = {});

/// Sizes and stats of every local cluster, ordered by local label.
WorkerSummary summarize(const WorkerState& w);

/// Relabels every local cluster by its global id from `map`, merging local
/// clusters that share a global id. The new dense local labels follow
/// ascending global id, so the local partition only ever coarsens.
/// Throws InvalidArgument when a local cluster has no entry in `map`.
WorkerState apply_global_labels(WorkerState w, const GlobalLabelMap& map);

}  // namespace discgs
