#include "discgs/master.hpp"

#include <numeric>
#include <set>
#include <string>

#include "discgs/categorical.hpp"
#include "discgs/error.hpp"

namespace discgs {
namespace {

struct Batch {
  BatchKey key;
  const SufficientStats* stats;
};

std::vector<Batch> collect_batches(std::span<const WorkerSummary> summaries,
                                   Eigen::Index& dim) {
  std::vector<Batch> batches;
  std::set<BatchKey> seen;
  dim = -1;
  for (const auto& summary : summaries) {
    for (const auto& entry : summary.clusters) {
      const BatchKey key{summary.worker_id, entry.local_label};
      if (entry.size < 1 || entry.stats.count() != entry.size) {
        throw InvalidArgument("summary entry (" + std::to_string(key.first) + ", " +
                              std::to_string(key.second) + ") has inconsistent size");
      }
      if (dim < 0) dim = entry.stats.dim();
      if (entry.stats.dim() != dim) throw InvalidArgument("summary dimensions disagree");
      if (!seen.insert(key).second) {
        throw InvalidArgument("duplicate batch (" + std::to_string(key.first) + ", " +
                              std::to_string(key.second) + ")");
      }
      batches.push_back({key, &entry.stats});
    }
  }
  if (batches.empty()) throw InvalidArgument("master received no batches");
  return batches;
}

GlobalState sweep_impl(std::span<const WorkerSummary> summaries, const ModelHyperParams& hyper,
                       const std::map<BatchKey, int>* seating, Rng& rng,
                       const MasterOptions& options) {
  Eigen::Index dim = 0;
  const auto batches = collect_batches(summaries, dim);
  if (hyper.g0.dim() != dim) throw InvalidArgument("prior dimension does not match summaries");

  ClusterTable table(hyper, dim);
  std::vector<int> slot_of(batches.size(), -1);
  if (seating != nullptr) {
    // Seat batches in their previous global clusters, opening slots in
    // ascending global label order.
    std::map<int, SufficientStats> seeded;
    std::vector<int> previous(batches.size(), -1);
    for (std::size_t b = 0; b < batches.size(); ++b) {
      const auto it = seating->find(batches[b].key);
      if (it == seating->end()) continue;
      previous[b] = it->second;
      auto [pos, inserted] = seeded.try_emplace(it->second, *batches[b].stats);
      if (!inserted) pos->second += *batches[b].stats;
    }
    std::map<int, int> slot_of_global;
    for (const auto& [g, stats] : seeded) slot_of_global[g] = table.open(stats);
    for (std::size_t b = 0; b < batches.size(); ++b) {
      if (previous[b] >= 0) slot_of[b] = slot_of_global.at(previous[b]);
    }
  }

  std::vector<std::size_t> order(batches.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  if (options.shuffle) {
    for (std::size_t i = order.size(); i-- > 1;) {
      const auto j = static_cast<std::size_t>(uniform01(rng) * static_cast<double>(i + 1));
      std::swap(order[i], order[std::min(j, i)]);
    }
  }

  std::vector<double> weights;
  for (const std::size_t b : order) {
    const auto& stats = *batches[b].stats;
    try {
      if (slot_of[b] >= 0) table.remove(slot_of[b], stats);
      table.batch_log_weights(stats, weights);
    } catch (const NumericalDegeneracy& e) {
      throw e.with_context("batch (worker " + std::to_string(batches[b].key.first) +
                           ", local " + std::to_string(batches[b].key.second) + ")");
    }
    if (options.observer) options.observer(b, weights);
    const int slot = table.slot_for_choice(sample_log_categorical(weights, uniform01(rng)));
    if (slot < 0) {
      slot_of[b] = table.open(stats);
    } else {
      table.add(slot, stats);
      slot_of[b] = slot;
    }
  }

  GlobalState out;
  out.hyper = hyper;
  const auto dense = table.dense_labels();
  for (std::size_t b = 0; b < batches.size(); ++b) {
    out.assignments[batches[b].key] = dense[static_cast<std::size_t>(slot_of[b])];
  }
  out.global_clusters = table.dense_stats();
  return out;
}

}  // namespace

GlobalState master_sweep(std::span<const WorkerSummary> summaries, const ModelHyperParams& hyper,
                         Rng& rng, const MasterOptions& options) {
  return sweep_impl(summaries, hyper, nullptr, rng, options);
}

GlobalState master_sweep(std::span<const WorkerSummary> summaries, const GlobalState& previous,
                         Rng& rng, const MasterOptions& options) {
  return sweep_impl(summaries, previous.hyper, &previous.assignments, rng, options);
}

GlobalState rekey_after_apply(const GlobalState& g) {
  std::map<int, std::set<int>> ids_by_worker;
  for (const auto& [key, global] : g.assignments) ids_by_worker[key.first].insert(global);
  GlobalState out;
  out.hyper = g.hyper;
  out.global_clusters = g.global_clusters;
  for (const auto& [worker, ids] : ids_by_worker) {
    int rank = 0;
    for (int global : ids) out.assignments[{worker, rank++}] = global;
  }
  return out;
}

Labels expand_to_global_membership(const GlobalLabelMap& map,
                                   std::span<const WorkerState> workers) {
  std::size_t n = 0;
  for (const auto& w : workers) n += static_cast<std::size_t>(w.shard.rows());
  Labels out(n, -1);
  for (const auto& w : workers) {
    const auto rows = static_cast<std::size_t>(w.shard.rows());
    if (w.offset + rows > n || w.local.labels.size() != rows) {
      throw InvalidArgument("worker " + std::to_string(w.worker_id) + " shard is out of range");
    }
    for (std::size_t i = 0; i < rows; ++i) {
      const auto it = map.entries.find({w.worker_id, w.local.labels[i]});
      if (it == map.entries.end()) {
        throw InvalidArgument("no global label for worker " + std::to_string(w.worker_id) +
                              " local cluster " + std::to_string(w.local.labels[i]));
      }
      if (out[w.offset + i] != -1) throw InvalidArgument("worker shards overlap");
      out[w.offset + i] = it->second;
    }
  }
  return out;
}

}  // namespace discgs
