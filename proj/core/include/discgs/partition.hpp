#pragma once

#include <span>
#include <vector>

#include "discgs/niw.hpp"
#include "discgs/sufficient_stats.hpp"
#include "discgs/types.hpp"

namespace discgs {

/// Membership vector plus per-cluster sufficient statistics of one sampler.
/// Labels are dense: clusters[k] summarizes exactly the points labeled k and
/// no cluster is empty.
struct PartitionState {
  Labels labels;
  std::vector<SufficientStats> clusters;
  ModelHyperParams hyper;

  std::size_t size() const noexcept { return labels.size(); }
  std::size_t num_clusters() const noexcept { return clusters.size(); }
};

/// Every point of `data` in a single cluster.
PartitionState one_cluster_state(const DataMatrix& data, const ModelHyperParams& hyper);

/// State whose clusters are recomputed from `labels` (dense, 0..K-1).
PartitionState state_from_labels(const DataMatrix& data, Labels labels,
                                 const ModelHyperParams& hyper);

/// Throws InvalidArgument if labels are not dense, a cluster is empty, sizes
/// do not add up, or (when `data` is given) a cluster's stats differ from a
/// direct recomputation by more than `tolerance` relative.
void check_consistency(const PartitionState& state, const DataMatrix* data = nullptr,
                       double tolerance = 1e-9);

/// log p(x, z | alpha, G0) for the partition whose clusters are `clusters`:
/// K log alpha + sum_k log Gamma(n_k) - sum_{i<n} log(alpha + i) plus the
/// per-cluster log marginals. Invariant under relabeling.
double log_joint(std::span<const SufficientStats> clusters, const ModelHyperParams& hyper);
double log_joint(const PartitionState& state);

/// Renumbers labels by first appearance; the induced partition is unchanged.
Labels canonical_labels(std::span<const int> labels);

}  // namespace discgs
