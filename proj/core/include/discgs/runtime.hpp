#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "discgs/master.hpp"
#include "discgs/messages.hpp"
#include "discgs/niw.hpp"
#include "discgs/trace.hpp"

namespace discgs {

struct RunConfig {
  double alpha = 1.0;
  int iterations = 100;
  int workers = 1;
  std::uint64_t seed = 0;
  /// Replaces the data-driven default prior when set.
  std::optional<NiwParams> prior_override;
  /// Record ARI every iteration (needs ground truth).
  bool record_trace = true;

  void validate() const;
};

/// Half-open range [begin, end) of observation indices.
struct ShardRange {
  std::size_t begin = 0;
  std::size_t end = 0;
  std::size_t size() const noexcept { return end - begin; }
  friend bool operator==(const ShardRange&, const ShardRange&) = default;
};

/// Contiguous even split of n observations over `workers` shards; the first
/// n mod W shards get one extra observation. Throws when W < 1 or W > n.
std::vector<ShardRange> shard(std::size_t n, int workers);

/// Observes every message crossing the worker/master boundary. The boundary
/// only carries these two message types.
class MessageTap {
 public:
  virtual ~MessageTap() = default;
  virtual void on_summary(int iteration, const WorkerSummary& summary) = 0;
  virtual void on_label_map(int iteration, int worker, const GlobalLabelMap& map) = 0;
  /// Expanded global membership after each iteration.
  virtual void on_membership(int /*iteration*/, std::span<const int> /*labels*/) {}
};

struct DiscgsResult {
  Labels labels;
  RunTrace trace;
  GlobalState global;
  NiwParams prior;
  PriorDiagnostics prior_diagnostics;
};

/// Distributed collapsed Gibbs sampling over W in-process worker actors.
///
/// Every worker starts with its shard in one local cluster. Each global
/// iteration: all workers sweep their shard in parallel and send a
/// WorkerSummary; the master runs one batch pass over all summaries; each
/// worker receives its slice of the GlobalLabelMap and merges its local
/// clusters accordingly. Worker j draws iteration t from the stream seeded by
/// stream_seed(seed, j, t), so results depend only on (seed, W, data).
DiscgsResult run_discgs(const DataMatrix& data, const RunConfig& config,
                        std::optional<std::span<const int>> ground_truth = std::nullopt,
                        MessageTap* tap = nullptr);

}  // namespace discgs
