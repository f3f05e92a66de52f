#pragma once

#include <optional>
#include <vector>

namespace discgs {

/// One global iteration (or one centralized sweep).
struct IterationRecord {
  int iteration = 0;  // 1-based
  double log_joint = 0.0;
  int num_clusters = 0;
  std::optional<double> ari;
  double wall_seconds = 0.0;
};

using RunTrace = std::vector<IterationRecord>;

/// Trailing moving average of log_joint over up to `window` records ending at
/// 1-based iteration `t`.
double moving_average_log_joint(const RunTrace& trace, int t, int window = 10);

}  // namespace discgs
