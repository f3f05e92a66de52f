#include "discgs/worker.hpp"

#include <algorithm>
#include <string>

#include "discgs/central.hpp"
#include "discgs/error.hpp"

namespace discgs {

WorkerState make_worker(int worker_id, std::size_t offset, DataMatrix shard,
                        const ModelHyperParams& hyper) {
  if (shard.rows() < 1) throw InvalidArgument("worker shard is empty");
  WorkerState w;
  w.worker_id = worker_id;
  w.offset = offset;
  w.local = one_cluster_state(shard, hyper);
  w.shard = std::move(shard);
  return w;
}

WorkerState worker_sweep(WorkerState w, Rng& rng, const WeightObserver& observer) {
  try {
    w.local = cgs_sweep(std::move(w.local), w.shard, rng, observer);
  } catch (const NumericalDegeneracy& e) {
    throw e.with_context("worker " + std::to_string(w.worker_id));
  }
  return w;
}

WorkerSummary summarize(const WorkerState& w) {
  WorkerSummary out;
  out.worker_id = w.worker_id;
  out.clusters.reserve(w.local.clusters.size());
  for (std::size_t k = 0; k < w.local.clusters.size(); ++k) {
    const auto& s = w.local.clusters[k];
    out.clusters.push_back({static_cast<int>(k), s.count(), s});
  }
  return out;
}

WorkerState apply_global_labels(WorkerState w, const GlobalLabelMap& map) {
  const auto k = w.local.clusters.size();
  std::vector<int> global(k);
  for (std::size_t h = 0; h < k; ++h) {
    const auto it = map.entries.find({w.worker_id, static_cast<int>(h)});
    if (it == map.entries.end()) {
      throw InvalidArgument("global label map has no entry for worker " +
                            std::to_string(w.worker_id) + " local cluster " + std::to_string(h));
    }
    global[h] = it->second;
  }
  std::vector<int> distinct = global;
  std::sort(distinct.begin(), distinct.end());
  distinct.erase(std::unique(distinct.begin(), distinct.end()), distinct.end());

  std::vector<int> relabel(k);
  for (std::size_t h = 0; h < k; ++h) {
    relabel[h] = static_cast<int>(
        std::lower_bound(distinct.begin(), distinct.end(), global[h]) - distinct.begin());
  }
  std::vector<SufficientStats> merged(distinct.size(), SufficientStats(w.shard.cols()));
  for (std::size_t h = 0; h < k; ++h) {
    merged[static_cast<std::size_t>(relabel[h])] += w.local.clusters[h];
  }
  for (auto& l : w.local.labels) l = relabel[static_cast<std::size_t>(l)];
  w.local.clusters = std::move(merged);
  return w;
}

}  // namespace discgs
