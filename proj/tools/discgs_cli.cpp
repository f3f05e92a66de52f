// discgs command-line driver: data generation, centralized and distributed
// fits, standalone evaluation and timing runs.

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <filesystem>
#include <iostream>
#include <numeric>
#include <optional>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "discgs/central.hpp"
#include "discgs/error.hpp"
#include "discgs/io.hpp"
#include "discgs/metrics.hpp"
#include "discgs/runtime.hpp"
#include "discgs/synth.hpp"

namespace fs = std::filesystem;
using json = nlohmann::json;
using namespace discgs;

namespace {

enum ExitCode : int { kOk = 0, kInternal = 1, kUsage = 2, kIo = 3, kNumerical = 4 };

int fail(const char* code, const std::string& message, int exit_code) {
  std::string line = message;
  std::replace(line.begin(), line.end(), '\n', ' ');
  std::cerr << "error[" << code << "]: " << line << '\n';
  return exit_code;
}

json to_json(const Matrix& m) {
  json rows = json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    json row = json::array();
    for (Eigen::Index j = 0; j < m.cols(); ++j) row.push_back(m(i, j));
    rows.push_back(std::move(row));
  }
  return rows;
}

json to_json(const NiwParams& p) {
  return {{"mu", std::vector<double>(p.mu.data(), p.mu.data() + p.mu.size())},
          {"kappa", p.kappa},
          {"nu", p.nu},
          {"psi", to_json(p.psi)}};
}

json base_manifest(const std::string& command, std::uint64_t seed) {
  return {{"command", command}, {"version", DISCGS_VERSION}, {"seed", seed}};
}

void add_prior(json& m, const NiwParams& prior, const PriorDiagnostics& diag) {
  m["prior"] = to_json(prior);
  m["prior_ridge_applied"] = diag.ridge_applied;
  m["prior_ridge"] = diag.ridge;
}

void write_json(const fs::path& path, const json& j) { write_text(path, j.dump(2) + "\n"); }

fs::path prepare_out(const std::string& dir) {
  fs::path out(dir);
  std::error_code ec;
  fs::create_directories(out, ec);
  if (ec) throw IoError(dir + ": cannot create output directory: " + ec.message());
  return out;
}

std::optional<Labels> load_truth(const std::string& path, std::size_t n) {
  if (path.empty()) return std::nullopt;
  auto truth = read_labels(path);
  if (truth.size() != n) {
    throw InvalidArgument("--truth has " + std::to_string(truth.size()) +
                          " labels but the data has " + std::to_string(n) + " rows");
  }
  return truth;
}

void write_fit_outputs(const fs::path& out, const Labels& labels, const RunTrace& trace,
                       const std::optional<Labels>& truth) {
  write_labels(out / "labels.csv", labels);
  write_trace(out / "trace.json", trace);
  MetricsReport report{count_clusters(labels), std::nullopt};
  if (truth) report.scores = evaluate(labels, *truth);
  write_metrics(out / "metrics.json", report);

  std::cout << "clusters=" << report.num_clusters_pred;
  if (report.scores) {
    std::cout << " ari=" << format_double(report.scores->ari)
              << " nmi=" << format_double(report.scores->nmi)
              << " acc=" << format_double(report.scores->acc);
  }
  std::cout << " out=" << out.string() << '\n';
}

// --- generate -------------------------------------------------------------

struct GenerateArgs {
  std::string preset;
  std::string spec;
  std::string out;
  std::uint64_t seed = 0;
};

int run_generate(const GenerateArgs& a) {
  const GmmSpec spec = a.preset.empty() ? read_gmm_spec(a.spec, a.seed) : preset(a.preset, a.seed);
  const auto gen = generate_gmm(spec);
  const auto out = prepare_out(a.out);
  write_dataset(out / "data.csv", gen.data);
  write_labels(out / "labels.csv", gen.labels);

  json m = base_manifest("generate", a.seed);
  m["source"] = a.preset.empty() ? json{{"spec", a.spec}} : json{{"preset", a.preset}};
  m["n"] = spec.n;
  m["d"] = spec.dim();
  m["components"] = spec.components.size();
  write_json(out / "manifest.json", m);
  std::cout << "rows=" << gen.data.rows() << " out=" << out.string() << '\n';
  return kOk;
}

// --- fit / fit-distributed ------------------------------------------------

struct FitArgs {
  std::string data;
  std::string truth;
  std::string out;
  double alpha = 1.0;
  int iters = 100;
  int workers = 1;
  std::uint64_t seed = 0;
};

int run_fit(const FitArgs& a) {
  const auto ds = read_dataset(a.data);
  const auto truth = load_truth(a.truth, static_cast<std::size_t>(ds.data.rows()));
  PriorDiagnostics diag;
  const ModelHyperParams hyper{a.alpha, default_prior(ds.data, &diag)};
  hyper.validate();

  CgsOptions opts;
  if (truth) opts.ground_truth = std::span<const int>(*truth);
  const auto [state, trace] = run_cgs(ds.data, hyper, a.iters, a.seed, opts);

  const auto out = prepare_out(a.out);
  write_fit_outputs(out, state.labels, trace, truth);
  json m = base_manifest("fit", a.seed);
  m["data"] = a.data;
  m["alpha"] = a.alpha;
  m["iterations"] = a.iters;
  m["workers"] = 0;
  add_prior(m, hyper.g0, diag);
  write_json(out / "manifest.json", m);
  return kOk;
}

int run_fit_distributed(const FitArgs& a) {
  const auto ds = read_dataset(a.data);
  const auto truth = load_truth(a.truth, static_cast<std::size_t>(ds.data.rows()));
  RunConfig cfg;
  cfg.alpha = a.alpha;
  cfg.iterations = a.iters;
  cfg.workers = a.workers;
  cfg.seed = a.seed;
  std::optional<std::span<const int>> gt;
  if (truth) gt = std::span<const int>(*truth);
  const auto res = run_discgs(ds.data, cfg, gt);

  const auto out = prepare_out(a.out);
  write_fit_outputs(out, res.labels, res.trace, truth);
  json m = base_manifest("fit-distributed", a.seed);
  m["data"] = a.data;
  m["alpha"] = a.alpha;
  m["iterations"] = a.iters;
  m["workers"] = a.workers;
  add_prior(m, res.prior, res.prior_diagnostics);
  write_json(out / "manifest.json", m);
  return kOk;
}

// --- evaluate -------------------------------------------------------------

struct EvaluateArgs {
  std::string pred;
  std::string truth;
  std::string out;
};

int run_evaluate(const EvaluateArgs& a) {
  const auto pred = read_labels(a.pred);
  const auto truth = read_labels(a.truth);
  if (pred.size() != truth.size()) {
    throw InvalidArgument("label files differ in length: " + std::to_string(pred.size()) +
                          " vs " + std::to_string(truth.size()));
  }
  const MetricsReport report{count_clusters(pred), evaluate(pred, truth)};
  if (a.out.empty()) {
    std::cout << "ari=" << format_double(report.scores->ari)
              << " nmi=" << format_double(report.scores->nmi)
              << " acc=" << format_double(report.scores->acc) << '\n';
    return kOk;
  }
  const fs::path path(a.out);
  if (path.has_parent_path()) prepare_out(path.parent_path().string());
  write_metrics(path, report);
  json m = base_manifest("evaluate", 0);
  m["pred"] = a.pred;
  m["truth"] = a.truth;
  write_json(path.parent_path() / "manifest.json", m);
  return kOk;
}

// --- bench ----------------------------------------------------------------

struct BenchArgs {
  std::string data;
  std::string preset;
  std::string truth;
  std::string out;
  std::vector<int> workers;
  double alpha = 1.0;
  int iters = 20;
  std::uint64_t seed = 0;
  bool include_central = false;
  bool force = false;
};

struct TimingRow {
  std::string mode;
  int workers = 0;
  int iterations = 0;
  double total_seconds = 0.0;
  double mean_iteration_seconds = 0.0;
  int num_clusters = 0;
};

TimingRow timing_row(std::string mode, int workers, const RunTrace& trace, double total) {
  TimingRow r{std::move(mode), workers, static_cast<int>(trace.size()), total, 0.0,
              trace.empty() ? 0 : trace.back().num_clusters};
  double sum = 0.0;
  for (const auto& t : trace) sum += t.wall_seconds;
  r.mean_iteration_seconds = trace.empty() ? 0.0 : sum / static_cast<double>(trace.size());
  return r;
}

int run_bench(const BenchArgs& a) {
  if (a.workers.empty()) throw InvalidArgument("--workers-list is empty");
  if (!a.truth.empty() && !a.force) {
    throw InvalidArgument("--truth enables per-iteration ARI, which skews timing; pass --force");
  }
  DataMatrix data;
  if (!a.preset.empty()) {
    data = generate_gmm(preset(a.preset, a.seed)).data;
  } else {
    data = read_dataset(a.data).data;
  }
  const auto truth = load_truth(a.truth, static_cast<std::size_t>(data.rows()));
  std::optional<std::span<const int>> gt;
  if (truth) gt = std::span<const int>(*truth);

  using clock = std::chrono::steady_clock;
  std::vector<TimingRow> rows;
  PriorDiagnostics diag;
  NiwParams prior;
  for (int w : a.workers) {
    RunConfig cfg;
    cfg.alpha = a.alpha;
    cfg.iterations = a.iters;
    cfg.workers = w;
    cfg.seed = a.seed;
    cfg.record_trace = truth.has_value();
    const auto t0 = clock::now();
    const auto res = run_discgs(data, cfg, gt);
    const double total = std::chrono::duration<double>(clock::now() - t0).count();
    rows.push_back(timing_row("distributed", w, res.trace, total));
    diag = res.prior_diagnostics;
    prior = res.prior;
    std::cerr << "distributed W=" << w << " mean_iteration_seconds="
              << rows.back().mean_iteration_seconds << '\n';
  }
  if (a.include_central) {
    const ModelHyperParams hyper{a.alpha, prior};
    CgsOptions opts;
    if (gt) opts.ground_truth = *gt;
    const auto t0 = clock::now();
    const auto [state, trace] = run_cgs(data, hyper, a.iters, a.seed, opts);
    const double total = std::chrono::duration<double>(clock::now() - t0).count();
    rows.push_back(timing_row("central", 0, trace, total));
    std::cerr << "central mean_iteration_seconds=" << rows.back().mean_iteration_seconds << '\n';
  }

  const auto out = prepare_out(a.out);
  std::ostringstream csv;
  csv << "mode,workers,iterations,total_seconds,mean_iteration_seconds,num_clusters\n";
  json table = json::array();
  for (const auto& r : rows) {
    csv << r.mode << ',' << r.workers << ',' << r.iterations << ',' << format_double(r.total_seconds)
        << ',' << format_double(r.mean_iteration_seconds) << ',' << r.num_clusters << '\n';
    table.push_back({{"mode", r.mode},
                     {"workers", r.workers},
                     {"iterations", r.iterations},
                     {"total_seconds", r.total_seconds},
                     {"mean_iteration_seconds", r.mean_iteration_seconds},
                     {"num_clusters", r.num_clusters}});
  }
  write_text(out / "timing.csv", csv.str());
  write_json(out / "timing.json", table);

  json m = base_manifest("bench", a.seed);
  m["data"] = a.preset.empty() ? json{{"path", a.data}} : json{{"preset", a.preset}};
  m["alpha"] = a.alpha;
  m["iterations"] = a.iters;
  m["workers"] = a.workers;
  m["include_central"] = a.include_central;
  m["hardware_threads"] = std::thread::hardware_concurrency();
  add_prior(m, prior, diag);
  write_json(out / "manifest.json", m);
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Dirichlet process mixture clustering with centralized and distributed "
               "collapsed Gibbs sampling"};
  app.set_version_flag("--version", std::string(DISCGS_VERSION));
  app.require_subcommand(1);

  GenerateArgs gen;
  auto* generate = app.add_subcommand("generate", "Sample a synthetic Gaussian mixture");
  auto* g_preset = generate->add_option("--preset", gen.preset, "Named mixture preset");
  auto* g_spec = generate->add_option("--spec", gen.spec, "Mixture spec JSON")->check(CLI::ExistingFile);
  g_preset->excludes(g_spec);
  generate->add_option("--out", gen.out, "Output directory")->required();
  generate->add_option("--seed", gen.seed, "Sampling seed");

  FitArgs fit;
  auto* fit_cmd = app.add_subcommand("fit", "Centralized collapsed Gibbs sampler");
  FitArgs dfit;
  auto* dfit_cmd = app.add_subcommand("fit-distributed", "Distributed sampler over W workers");
  for (auto [cmd, args] : {std::pair{fit_cmd, &fit}, std::pair{dfit_cmd, &dfit}}) {
    cmd->add_option("--data", args->data, "Input CSV")->required();
    cmd->add_option("--truth", args->truth, "Ground-truth labels CSV");
    cmd->add_option("--out", args->out, "Output directory")->required();
    cmd->add_option("--alpha", args->alpha, "DP concentration")->check(CLI::PositiveNumber);
    cmd->add_option("--iters", args->iters, "Iterations")->check(CLI::Range(1, 1 << 30));
    cmd->add_option("--seed", args->seed, "Random seed");
  }
  dfit_cmd->add_option("--workers", dfit.workers, "Number of workers")->check(CLI::Range(1, 1 << 20));

  EvaluateArgs ev;
  auto* eval_cmd = app.add_subcommand("evaluate", "Score predicted labels against ground truth");
  eval_cmd->add_option("--pred", ev.pred, "Predicted labels CSV")->required();
  eval_cmd->add_option("--truth", ev.truth, "Ground-truth labels CSV")->required();
  eval_cmd->add_option("--out", ev.out, "Metrics JSON path (stdout when omitted)");

  BenchArgs bench;
  auto* bench_cmd = app.add_subcommand("bench", "Time distributed runs over a list of worker counts");
  auto* b_data = bench_cmd->add_option("--data", bench.data, "Input CSV");
  auto* b_preset = bench_cmd->add_option("--preset", bench.preset, "Generate a preset in memory");
  b_data->excludes(b_preset);
  bench_cmd->add_option("--workers-list", bench.workers, "Comma-separated worker counts")
      ->delimiter(',')
      ->required()
      ->check(CLI::Range(1, 1 << 20));
  bench_cmd->add_option("--iters", bench.iters, "Iterations per run")->check(CLI::Range(1, 1 << 30));
  bench_cmd->add_option("--alpha", bench.alpha, "DP concentration")->check(CLI::PositiveNumber);
  bench_cmd->add_option("--seed", bench.seed, "Random seed");
  bench_cmd->add_option("--truth", bench.truth, "Ground-truth labels CSV (requires --force)");
  bench_cmd->add_option("--out", bench.out, "Output directory")->required();
  bench_cmd->add_flag("--include-central", bench.include_central, "Also time the centralized sampler");
  bench_cmd->add_flag("--force", bench.force, "Allow per-iteration ARI during timing");

  try {
    app.parse(argc, argv);
    if (generate->parsed() && gen.preset.empty() && gen.spec.empty()) {
      throw CLI::ValidationError("generate", "one of --preset or --spec is required");
    }
    if (bench_cmd->parsed() && bench.preset.empty() && bench.data.empty()) {
      throw CLI::ValidationError("bench", "one of --data or --preset is required");
    }
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    return fail("usage", e.what(), kUsage);
  }

  try {
    if (generate->parsed()) return run_generate(gen);
    if (fit_cmd->parsed()) return run_fit(fit);
    if (dfit_cmd->parsed()) return run_fit_distributed(dfit);
    if (eval_cmd->parsed()) return run_evaluate(ev);
    if (bench_cmd->parsed()) return run_bench(bench);
  } catch (const InvalidArgument& e) {
    return fail("usage", e.what(), kUsage);
  } catch (const IoError& e) {
    return fail("io", e.what(), kIo);
  } catch (const NumericalDegeneracy& e) {
    return fail("numerical", e.what(), kNumerical);
  } catch (const std::exception& e) {
    return fail("internal", e.what(), kInternal);
  }
  return kInternal;
}
