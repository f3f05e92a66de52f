#include "discgs/partition.hpp"

#include <cmath>
#include <string>
#include <unordered_map>

#include "discgs/error.hpp"

namespace discgs {

PartitionState one_cluster_state(const DataMatrix& data, const ModelHyperParams& hyper) {
  return state_from_labels(data, Labels(static_cast<std::size_t>(data.rows()), 0), hyper);
}

PartitionState state_from_labels(const DataMatrix& data, Labels labels,
                                 const ModelHyperParams& hyper) {
  if (labels.size() != static_cast<std::size_t>(data.rows())) {
    throw InvalidArgument("label count does not match the number of observations");
  }
  int k = 0;
  for (int l : labels) {
    if (l < 0) throw InvalidArgument("negative cluster label");
    k = std::max(k, l + 1);
  }
  PartitionState state;
  state.hyper = hyper;
  state.clusters.assign(static_cast<std::size_t>(k), SufficientStats(data.cols()));
  for (std::size_t i = 0; i < labels.size(); ++i) {
    state.clusters[static_cast<std::size_t>(labels[i])].add_point(
        data.row(static_cast<Eigen::Index>(i)).transpose());
  }
  state.labels = std::move(labels);
  check_consistency(state);
  return state;
}

void check_consistency(const PartitionState& state, const DataMatrix* data, double tolerance) {
  const auto k = state.clusters.size();
  std::vector<long> sizes(k, 0);
  for (int l : state.labels) {
    if (l < 0 || static_cast<std::size_t>(l) >= k) {
      throw InvalidArgument("label " + std::to_string(l) + " outside 0.." +
                            std::to_string(static_cast<long>(k) - 1));
    }
    ++sizes[static_cast<std::size_t>(l)];
  }
  for (std::size_t c = 0; c < k; ++c) {
    if (sizes[c] == 0) throw InvalidArgument("cluster " + std::to_string(c) + " is empty");
    if (sizes[c] != state.clusters[c].count()) {
      throw InvalidArgument("cluster " + std::to_string(c) + " size disagrees with its stats");
    }
  }
  if (data == nullptr) return;
  if (static_cast<std::size_t>(data->rows()) != state.labels.size()) {
    throw InvalidArgument("state and data differ in number of observations");
  }
  std::vector<SufficientStats> direct(k, SufficientStats(data->cols()));
  for (std::size_t i = 0; i < state.labels.size(); ++i) {
    direct[static_cast<std::size_t>(state.labels[i])].add_point(
        data->row(static_cast<Eigen::Index>(i)).transpose());
  }
  for (std::size_t c = 0; c < k; ++c) {
    const auto& s = state.clusters[c];
    const double scale = 1.0 + direct[c].sum_outer().cwiseAbs().maxCoeff();
    if ((s.sum() - direct[c].sum()).cwiseAbs().maxCoeff() > tolerance * scale ||
        (s.sum_outer() - direct[c].sum_outer()).cwiseAbs().maxCoeff() > tolerance * scale) {
      throw InvalidArgument("cluster " + std::to_string(c) + " stats drifted from its points");
    }
  }
}

double log_joint(std::span<const SufficientStats> clusters, const ModelHyperParams& hyper) {
  long n = 0;
  double out = 0.0;
  for (const auto& s : clusters) {
    n += s.count();
    out += std::lgamma(static_cast<double>(s.count())) + log_marginal(s, hyper.g0);
  }
  const double alpha = hyper.alpha;
  // sum_{i=1..n} log(alpha + i - 1) = log Gamma(alpha + n) - log Gamma(alpha)
  out += static_cast<double>(clusters.size()) * std::log(alpha) -
         (std::lgamma(alpha + static_cast<double>(n)) - std::lgamma(alpha));
  return out;
}

double log_joint(const PartitionState& state) { return log_joint(state.clusters, state.hyper); }

Labels canonical_labels(std::span<const int> labels) {
  std::unordered_map<int, int> seen;
  Labels out(labels.size());
  for (std::size_t i = 0; i < labels.size(); ++i) {
    const auto [it, inserted] = seen.emplace(labels[i], static_cast<int>(seen.size()));
    out[i] = it->second;
  }
  return out;
}

}  // namespace discgs
