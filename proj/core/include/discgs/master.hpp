#pragma once

#include <map>
#include <span>
#include <vector>

#include "discgs/cluster_table.hpp"
#include "discgs/messages.hpp"
#include "discgs/niw.hpp"
#include "discgs/rng.hpp"
#include "discgs/worker.hpp"

namespace discgs {

/// The master's view: which global cluster each batch belongs to and the
/// aggregated stats of every global cluster. Built from summaries alone.
struct GlobalState {
  std::map<BatchKey, int> assignments;
  std::vector<SufficientStats> global_clusters;
  ModelHyperParams hyper;

  std::size_t num_clusters() const noexcept { return global_clusters.size(); }
  GlobalLabelMap label_map() const { return GlobalLabelMap{assignments}; }
};

struct MasterOptions {
  /// Visit batches in a uniformly shuffled order (one Fisher-Yates pass on the
  /// master stream). When false, batches are visited in summary order.
  bool shuffle = true;
  /// Sees the log-weights of every batch draw; `item` is the batch's position
  /// in summary order.
  WeightObserver observer;
};

/// One batch-level collapsed Gibbs pass starting from an empty global state:
/// each batch is seated in turn.
GlobalState master_sweep(std::span<const WorkerSummary> summaries, const ModelHyperParams& hyper,
                         Rng& rng, const MasterOptions& options = {});

/// One pass starting from `previous`: every batch whose key appears in
/// previous.assignments starts in that global cluster, the rest start
/// unseated. Each batch is then removed from its cluster (emptied clusters
/// are deleted), reassigned with weights log n_k + log p(batch | cluster k)
/// and log alpha + log p(batch | G0), and reinserted. Global labels are
/// compacted at the end.
GlobalState master_sweep(std::span<const WorkerSummary> summaries, const GlobalState& previous,
                         Rng& rng, const MasterOptions& options = {});

/// Re-keys assignments to the local labels workers hold after
/// apply_global_labels (local label = rank of the global id within that
/// worker), so the next master pass can start from the current seating.
GlobalState rekey_after_apply(const GlobalState& g);

/// Per-observation global labels in original dataset order. Throws when a
/// local cluster has no map entry or the shards do not tile 0..n-1.
Labels expand_to_global_membership(const GlobalLabelMap& map,
                                   std::span<const WorkerState> workers);

}  // namespace discgs
