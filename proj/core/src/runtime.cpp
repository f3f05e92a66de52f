#include "discgs/runtime.hpp"

#include <chrono>
#include <exception>
#include <limits>
#include <memory>
#include <string>
#include <thread>
#include <variant>

#include "discgs/channel.hpp"
#include "discgs/error.hpp"
#include "discgs/metrics.hpp"
#include "discgs/partition.hpp"
#include "discgs/worker.hpp"

namespace discgs {

void RunConfig::validate() const {
  if (!(alpha > 0.0)) throw InvalidArgument("alpha must be > 0");
  if (iterations < 1) throw InvalidArgument("iterations must be >= 1");
  if (workers < 1) throw InvalidArgument("workers must be >= 1");
  if (prior_override) prior_override->validate();
}

std::vector<ShardRange> shard(std::size_t n, int workers) {
  if (workers < 1) throw InvalidArgument("need at least one worker");
  const auto w = static_cast<std::size_t>(workers);
  if (w > n) {
    throw InvalidArgument("cannot split " + std::to_string(n) + " observations over " +
                          std::to_string(workers) + " workers");
  }
  std::vector<ShardRange> out;
  out.reserve(w);
  const std::size_t base = n / w;
  const std::size_t extra = n % w;
  std::size_t begin = 0;
  for (std::size_t j = 0; j < w; ++j) {
    const std::size_t len = base + (j < extra ? 1 : 0);
    out.push_back({begin, begin + len});
    begin += len;
  }
  return out;
}

namespace {

struct SweepCommand {
  int iteration;
};
struct StopCommand {};
using WorkerCommand = std::variant<SweepCommand, GlobalLabelMap, StopCommand>;

struct WorkerReply {
  int worker_id = 0;
  std::optional<WorkerSummary> summary;
  std::exception_ptr error;
};

// One worker context. Owns its WorkerState between messages; the coordinator
// only reads it while the worker is blocked on its inbox.
class WorkerActor {
 public:
  WorkerActor(WorkerState& state, std::uint64_t seed, Channel<WorkerReply>& outbox)
      : state_(state), seed_(seed), outbox_(outbox) {}

  Channel<WorkerCommand>& inbox() { return inbox_; }

  void run() {
    for (;;) {
      WorkerCommand cmd = inbox_.pop();
      if (std::holds_alternative<StopCommand>(cmd)) return;
      if (auto* map = std::get_if<GlobalLabelMap>(&cmd)) {
        try {
          state_ = apply_global_labels(std::move(state_), *map);
        } catch (...) {
          pending_ = std::current_exception();
        }
        continue;
      }
      const int t = std::get<SweepCommand>(cmd).iteration;
      WorkerReply reply;
      reply.worker_id = state_.worker_id;
      if (pending_) {
        reply.error = std::exchange(pending_, nullptr);
      } else {
        try {
          Rng rng(stream_seed(seed_, static_cast<std::uint64_t>(state_.worker_id),
                              static_cast<std::uint64_t>(t)));
          state_ = worker_sweep(std::move(state_), rng);
          reply.summary = summarize(state_);
        } catch (...) {
          reply.error = std::current_exception();
        }
      }
      outbox_.push(std::move(reply));
    }
  }

 private:
  WorkerState& state_;
  std::uint64_t seed_;
  Channel<WorkerReply>& outbox_;
  Channel<WorkerCommand> inbox_;
  std::exception_ptr pending_;
};

GlobalLabelMap slice_for(const GlobalLabelMap& map, int worker) {
  GlobalLabelMap out;
  for (auto it = map.entries.lower_bound({worker, std::numeric_limits<int>::min()});
       it != map.entries.end() && it->first.first == worker; ++it) {
    out.entries.insert(*it);
  }
  return out;
}

[[noreturn]] void rethrow_with_iteration(std::exception_ptr error, int t) {
  const std::string where = "iteration " + std::to_string(t);
  try {
    std::rethrow_exception(error);
  } catch (const NumericalDegeneracy& e) {
    throw e.with_context(where);
  } catch (const InvalidArgument& e) {
    throw InvalidArgument(where + ": " + e.what());
  }
}

}  // namespace

DiscgsResult run_discgs(const DataMatrix& data, const RunConfig& config,
                        std::optional<std::span<const int>> ground_truth, MessageTap* tap) {
  config.validate();
  const auto n = static_cast<std::size_t>(data.rows());
  if (ground_truth && ground_truth->size() != n) {
    throw InvalidArgument("ground truth length does not match the data");
  }
  const auto ranges = shard(n, config.workers);

  DiscgsResult result;
  if (config.prior_override) {
    result.prior = *config.prior_override;
  } else {
    result.prior = default_prior(data, &result.prior_diagnostics);
  }
  if (result.prior.dim() != data.cols()) {
    throw InvalidArgument("prior dimension does not match data");
  }
  const ModelHyperParams hyper{config.alpha, result.prior};

  std::vector<WorkerState> states;
  states.reserve(ranges.size());
  for (std::size_t j = 0; j < ranges.size(); ++j) {
    const auto& r = ranges[j];
    states.push_back(make_worker(static_cast<int>(j), r.begin,
                                 data.middleRows(static_cast<Eigen::Index>(r.begin),
                                                 static_cast<Eigen::Index>(r.size())),
                                 hyper));
  }

  Channel<WorkerReply> outbox;
  std::vector<std::unique_ptr<WorkerActor>> actors;
  for (auto& s : states) actors.push_back(std::make_unique<WorkerActor>(s, config.seed, outbox));

  std::vector<std::jthread> threads;
  // Declared after `threads` so it runs first on unwinding: every actor gets
  // a stop command before its thread is joined.
  struct StopAll {
    std::vector<std::unique_ptr<WorkerActor>>& actors;
    ~StopAll() {
      for (auto& a : actors) a->inbox().push(StopCommand{});
    }
  };
  threads.reserve(actors.size());
  for (auto& a : actors) threads.emplace_back([&actor = *a] { actor.run(); });
  StopAll stop_all{actors};

  const bool want_ari = ground_truth.has_value() && config.record_trace && n >= 2;
  Rng master_rng(mix64(config.seed));
  std::optional<GlobalState> carried;
  std::vector<WorkerSummary> summaries(states.size());
  result.trace.reserve(static_cast<std::size_t>(config.iterations));

  for (int t = 1; t <= config.iterations; ++t) {
    const auto start = std::chrono::steady_clock::now();
    for (auto& a : actors) a->inbox().push(SweepCommand{t});
    std::exception_ptr failure;
    for (std::size_t received = 0; received < actors.size(); ++received) {
      WorkerReply reply = outbox.pop();
      if (reply.error) {
        if (!failure) failure = reply.error;
        continue;
      }
      summaries[static_cast<std::size_t>(reply.worker_id)] = std::move(*reply.summary);
    }
    if (failure) rethrow_with_iteration(failure, t);
    if (tap != nullptr) {
      for (const auto& s : summaries) tap->on_summary(t, s);
    }

    GlobalState global;
    try {
      global = carried ? master_sweep(summaries, *carried, master_rng)
                       : master_sweep(summaries, hyper, master_rng);
    } catch (...) {
      rethrow_with_iteration(std::current_exception(), t);
    }
    const GlobalLabelMap map = global.label_map();

    // Workers are idle until the map arrives, so their local labels can be
    // read here. Expansion is excluded from the iteration time.
    double untimed = 0.0;
    Labels membership;
    if (want_ari || tap != nullptr || t == config.iterations) {
      const auto expand_start = std::chrono::steady_clock::now();
      membership = expand_to_global_membership(map, states);
      untimed = std::chrono::duration<double>(std::chrono::steady_clock::now() - expand_start)
                    .count();
    }

    for (std::size_t j = 0; j < actors.size(); ++j) {
      GlobalLabelMap slice = slice_for(map, static_cast<int>(j));
      if (tap != nullptr) tap->on_label_map(t, static_cast<int>(j), slice);
      actors[j]->inbox().push(std::move(slice));
    }
    carried = rekey_after_apply(global);

    IterationRecord rec;
    rec.iteration = t;
    rec.wall_seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count() - untimed;
    rec.log_joint = log_joint(global.global_clusters, hyper);
    rec.num_clusters = static_cast<int>(global.num_clusters());
    if (want_ari) rec.ari = ari(membership, *ground_truth);
    result.trace.push_back(rec);
    if (tap != nullptr) tap->on_membership(t, membership);

    if (t == config.iterations) {
      result.labels = std::move(membership);
      result.global = std::move(global);
    }
  }
  return result;
}

}  // namespace discgs
