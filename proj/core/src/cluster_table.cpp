#include "discgs/cluster_table.hpp"

#include <algorithm>
#include <cmath>

#include "discgs/error.hpp"

namespace discgs {

ClusterTable::ClusterTable(const ModelHyperParams& hyper, Eigen::Index dim)
    : hyper_(hyper),
      log_alpha_(std::log(hyper.alpha)),
      prior_post_(hyper.g0, SufficientStats(dim)),
      scratch_(dim) {}

void ClusterTable::refresh(int slot) {
  const auto s = static_cast<std::size_t>(slot);
  posteriors_[s] = ClusterPosterior(hyper_.g0, slots_[s]);
}

int ClusterTable::open(const SufficientStats& stats) {
  if (stats.empty()) throw InvalidArgument("cannot open a cluster with no points");
  const int slot = static_cast<int>(slots_.size());
  slots_.push_back(stats);
  posteriors_.emplace_back(hyper_.g0, stats);
  open_.push_back(slot);
  return slot;
}

void ClusterTable::add(int slot, const SufficientStats& stats) {
  slots_[static_cast<std::size_t>(slot)] += stats;
  refresh(slot);
}

void ClusterTable::add_point(int slot, const Eigen::Ref<const Vector>& x) {
  slots_[static_cast<std::size_t>(slot)].add_point(x);
  refresh(slot);
}

namespace {
void close_slot(std::vector<int>& open, int slot) {
  const auto it = std::lower_bound(open.begin(), open.end(), slot);
  if (it != open.end() && *it == slot) open.erase(it);
}
}  // namespace

bool ClusterTable::remove(int slot, const SufficientStats& stats) {
  auto& s = slots_[static_cast<std::size_t>(slot)];
  s -= stats;
  if (s.empty()) {
    close_slot(open_, slot);
    return true;
  }
  refresh(slot);
  return false;
}

bool ClusterTable::remove_point(int slot, const Eigen::Ref<const Vector>& x) {
  auto& s = slots_[static_cast<std::size_t>(slot)];
  s.remove_point(x);
  if (s.empty()) {
    close_slot(open_, slot);
    return true;
  }
  refresh(slot);
  return false;
}

void ClusterTable::point_log_weights(const Eigen::Ref<const Vector>& x,
                                     std::vector<double>& out) {
  out.resize(open_.size() + 1);
  for (std::size_t c = 0; c < open_.size(); ++c) {
    const auto s = static_cast<std::size_t>(open_[c]);
    out[c] = std::log(static_cast<double>(slots_[s].count())) +
             posteriors_[s].log_point_predictive(x, scratch_);
  }
  out.back() = log_alpha_ + prior_post_.log_point_predictive(x, scratch_);
}

void ClusterTable::batch_log_weights(const SufficientStats& batch,
                                     std::vector<double>& out) const {
  out.resize(open_.size() + 1);
  for (std::size_t c = 0; c < open_.size(); ++c) {
    const auto s = static_cast<std::size_t>(open_[c]);
    out[c] = std::log(static_cast<double>(slots_[s].count())) +
             posteriors_[s].log_batch_predictive(batch);
  }
  out.back() = log_alpha_ + prior_post_.log_batch_predictive(batch);
}

std::vector<int> ClusterTable::dense_labels() const {
  std::vector<int> dense(slots_.size(), -1);
  int next = 0;
  for (int slot : open_) dense[static_cast<std::size_t>(slot)] = next++;
  return dense;
}

std::vector<SufficientStats> ClusterTable::dense_stats() const {
  std::vector<SufficientStats> out;
  out.reserve(open_.size());
  for (int slot : open_) out.push_back(slots_[static_cast<std::size_t>(slot)]);
  return out;
}

}  // namespace discgs
