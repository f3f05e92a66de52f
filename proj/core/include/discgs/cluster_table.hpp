#pragma once

#include <functional>
#include <span>
#include <vector>

#include "discgs/niw.hpp"
#include "discgs/sufficient_stats.hpp"

namespace discgs {

/// Receives the unnormalized log-weights computed for one Gibbs step: one
/// entry per existing cluster (in table order) followed by the new-cluster
/// entry. `item` is the observation or batch index within the sweep.
using WeightObserver = std::function<void(std::size_t item, std::span<const double> log_weights)>;

/// Working set of clusters for one collapsed Gibbs sweep (a CRP "restaurant").
///
/// Clusters live in slots. A slot is closed as soon as its cluster empties and
/// new clusters always take a fresh slot at the end, so the open slots keep
/// their relative order for the whole sweep. Each open slot caches its NIW
/// posterior so a predictive evaluation never refactorizes.
class ClusterTable {
 public:
  ClusterTable(const ModelHyperParams& hyper, Eigen::Index dim);

  /// Opens a slot holding `stats` and returns it.
  int open(const SufficientStats& stats);
  void add(int slot, const SufficientStats& stats);
  void add_point(int slot, const Eigen::Ref<const Vector>& x);
  /// Returns true when the slot emptied and was closed.
  bool remove(int slot, const SufficientStats& stats);
  bool remove_point(int slot, const Eigen::Ref<const Vector>& x);

  /// Open slots in ascending order.
  std::span<const int> open_slots() const noexcept { return open_; }
  std::size_t num_open() const noexcept { return open_.size(); }
  const SufficientStats& stats(int slot) const { return slots_[static_cast<std::size_t>(slot)]; }

  /// log n_k + log p(x | cluster k) per open slot, then log alpha + log p(x | G0).
  void point_log_weights(const Eigen::Ref<const Vector>& x, std::vector<double>& out);
  /// Same for a batch of points summarized by `batch`; n_k counts points.
  void batch_log_weights(const SufficientStats& batch, std::vector<double>& out) const;

  /// Slot chosen by a categorical draw over the weights above, or -1 when the
  /// draw selected the new-cluster entry.
  int slot_for_choice(std::size_t choice) const noexcept {
    return choice < open_.size() ? open_[choice] : -1;
  }

  /// Dense label of every slot (-1 for closed slots), preserving slot order.
  std::vector<int> dense_labels() const;
  /// Stats of the open slots in slot order; index = dense label.
  std::vector<SufficientStats> dense_stats() const;

 private:
  void refresh(int slot);

  ModelHyperParams hyper_;
  double log_alpha_;
  ClusterPosterior prior_post_;
  std::vector<SufficientStats> slots_;
  std::vector<ClusterPosterior> posteriors_;
  std::vector<int> open_;
  Vector scratch_;
};

}  // namespace discgs
