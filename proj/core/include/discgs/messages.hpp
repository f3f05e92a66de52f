#pragma once

#include <algorithm>
#include <map>
#include <utility>
#include <vector>

#include "discgs/sufficient_stats.hpp"

namespace discgs {

/// One worker-local cluster as seen by the master: no raw points, only the
/// cluster's size and sufficient statistics.
struct SummaryEntry {
  int local_label = 0;
  long size = 0;
  SufficientStats stats;
};

/// Worker -> master message: one entry per non-empty local cluster, ordered
/// by local label.
struct WorkerSummary {
  int worker_id = 0;
  std::vector<SummaryEntry> clusters;

  long total_size() const noexcept {
    long n = 0;
    for (const auto& c : clusters) n += c.size;
    return n;
  }
};

/// (worker_id, local_label) identifying one batch of points.
using BatchKey = std::pair<int, int>;

/// Master -> worker message: the global cluster of every batch. Global
/// labels are dense.
struct GlobalLabelMap {
  std::map<BatchKey, int> entries;

  int num_global_clusters() const noexcept {
    int k = 0;
    for (const auto& [key, g] : entries) k = std::max(k, g + 1);
    return k;
  }
};

}  // namespace discgs
