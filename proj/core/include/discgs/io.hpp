#pragma once

#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "discgs/metrics.hpp"
#include "discgs/synth.hpp"
#include "discgs/trace.hpp"
#include "discgs/types.hpp"

namespace discgs {

/// A numeric CSV table. A column named "label" is split off as integer
/// ground-truth labels.
struct Dataset {
  DataMatrix data;
  std::optional<Labels> labels;
  std::vector<std::string> columns;
};

/// Reads a CSV with a header row and one observation per row. Throws IoError
/// naming the 1-based line for malformed rows, non-numeric or non-finite
/// cells, and "no rows" for a header-only file.
Dataset read_dataset(const std::filesystem::path& path);
void write_dataset(const std::filesystem::path& path, const DataMatrix& data);

/// Labels CSV: header "index,label", then one "i,label" row per observation.
Labels read_labels(const std::filesystem::path& path);
void write_labels(const std::filesystem::path& path, std::span<const int> labels);

struct MetricsReport {
  int num_clusters_pred = 0;
  /// Present only when ground truth was available.
  std::optional<ClusteringScores> scores;
};

/// Flat JSON object {ari, nmi, acc, num_clusters_pred, num_clusters_true,
/// nmi_normalization}; the score keys are omitted without ground truth.
void write_metrics(const std::filesystem::path& path, const MetricsReport& report);

/// JSON array with one object per iteration.
void write_trace(const std::filesystem::path& path, const RunTrace& trace);
RunTrace read_trace(const std::filesystem::path& path);

/// Mixture description: {"n": ..., "components": [{"weight", "mean",
/// "covariance"}]}. The sampling seed comes from the caller.
GmmSpec read_gmm_spec(const std::filesystem::path& path, std::uint64_t seed);

/// Shortest decimal text that parses back to exactly `x`.
std::string format_double(double x);

/// Writes `text` to `path`, throwing IoError on failure.
void write_text(const std::filesystem::path& path, const std::string& text);

}  // namespace discgs
