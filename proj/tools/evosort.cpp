// evosort: run, calibrate and verify top-k tracking on evolving orders.
//
// Exit codes: 0 success, 1 config error, 2 I/O error, 3 acceptance failure.

#include <CLI11.hpp>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <json.hpp>
#include <memory>
#include <string>
#include <vector>

#include "evosort/acceptance.hpp"
#include "evosort/harness.hpp"

namespace {

using namespace evosort;

constexpr int kExitConfig = 1;
constexpr int kExitIo = 2;
constexpr int kExitAcceptance = 3;

struct RunOptions {
  std::string model = "consecutive";
  std::string problem = "selection";
  std::string format = "csv";
  std::string init = "uniform";
  bool serial = false;
  ExperimentConfig config;
};

void add_experiment_options(CLI::App* cmd, RunOptions& o) {
  ExperimentConfig& c = o.config;
  cmd->add_option("--model", o.model, "Swap model")->check(CLI::IsMember({"consecutive", "gaussian"}));
  cmd->add_option("--problem", o.problem, "Pipeline to run")->check(CLI::IsMember({"set", "selection"}));
  cmd->add_option("--n", c.n, "Number of elements")->required();
  cmd->add_option("--k", c.ks, "k, or a comma-separated sweep")->delimiter(',')->required();
  cmd->add_option("--alpha", c.alpha, "Swaps per time step (0 freezes the world)");
  cmd->add_option("--horizon", c.horizon, "Time steps per trial");
  cmd->add_option("--trials", c.trials, "Independent trials per k");
  cmd->add_option("--seed", c.master_seed, "Master seed");
  cmd->add_option("--c", c.c, "Window constant c");
  cmd->add_option("--cprime", c.c_prime, "Candidate-set constant c'");
  cmd->add_option("--sample-every", c.sample_every, "Record cadence in steps");
  cmd->add_option("--init", o.init, "Initial order")->check(CLI::IsMember({"uniform", "identity"}));
  cmd->add_option("--threads", c.threads, "Worker threads (0: OpenMP default)");
  cmd->add_flag("--serial", o.serial, "Run trials on the calling thread");
}

void finalize(RunOptions& o) {
  o.config.model = parse_model_kind(o.model);
  o.config.problem = parse_problem(o.problem);
  o.config.init = o.init == "identity" ? InitialOrder::Identity : InitialOrder::Uniform;
  o.config.format = o.format == "json" ? OutputFormat::Json : OutputFormat::Csv;
}

std::string opt(const std::optional<double>& v, int precision = 4) {
  if (!v) return "-";
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*f", precision, *v);
  return buf;
}

void print_summaries(const std::vector<SummaryStats>& summaries) {
  std::printf("%-12s %7s %7s %5s %8s %9s %9s %10s %10s %10s %11s %9s\n", "model", "n", "k", "alpha", "samples",
              "p_set_ok", "p_kt_zero", "kt_mean", "kt_median", "kt_p95", "warmup", "wall_s");
  for (const SummaryStats& s : summaries) {
    std::printf("%-12s %7zu %7zu %5u %8llu %9.4f %9s %10s %10s %10s %11llu %9.2f\n", to_string(s.model).c_str(), s.n,
                s.k, s.alpha, static_cast<unsigned long long>(s.records.samples), s.records.p_set_ok,
                opt(s.records.p_kt_zero).c_str(), opt(s.records.kt_mean, 2).c_str(),
                opt(s.records.kt_median, 1).c_str(), opt(s.records.kt_p95, 1).c_str(),
                static_cast<unsigned long long>(s.warmup_steps_observed), s.wall_time_s);
  }
}

int cmd_run(RunOptions& o) {
  finalize(o);
  for (const auto& w : validate(o.config)) std::cerr << "warning: " << w << '\n';
  const auto result = run_experiment(o.config, o.serial ? Execution::Serial : Execution::Parallel);
  print_summaries(result.summaries);
  if (!o.config.out.empty()) std::cerr << "wrote " << o.config.out << '\n';
  return 0;
}

int cmd_calibrate(RunOptions& o, const std::vector<double>& sweep, const std::string& out) {
  finalize(o);
  for (const auto& w : validate(o.config)) std::cerr << "warning: " << w << '\n';
  nlohmann::ordered_json report = nlohmann::ordered_json::array();
  for (double c : sweep) {
    ExperimentConfig cfg = o.config;
    cfg.c = cfg.c_prime = c;
    cfg.out.clear();
    const auto result = run_experiment(cfg, o.serial ? Execution::Serial : Execution::Parallel);
    std::printf("c = c' = %g\n", c);
    print_summaries(result.summaries);
    for (const auto& s : result.summaries) {
      nlohmann::ordered_json row = nlohmann::ordered_json::parse(summaries_json({&s, 1})).at(0);
      row["c"] = c;
      report.push_back(row);
    }
  }
  if (!out.empty()) write_file(out, report.dump(2) + "\n");
  return 0;
}

int cmd_verify(const std::vector<int>& only, int threads) {
  verify::Options opts;
  opts.only.insert(only.begin(), only.end());
  opts.threads = threads;
  bool ok = true;
  verify::run_acceptance(opts, [&](const verify::CriterionResult& r) {
    std::cout << verify::format_result(r) << std::endl;
    ok = ok && r.passed;
  });
  return ok ? 0 : kExitAcceptance;
}

int cmd_trace(RunOptions& o, std::uint64_t steps, const std::string& swap_log) {
  finalize(o);
  if (o.config.ks.size() != 1) throw ConfigError("trace takes a single --k");
  if (o.config.ks[0] < 1 || o.config.ks[0] > o.config.n) throw ConfigError("--k must lie in [1, n]");
  std::ofstream trace_file;
  std::ostream* trace = &std::cout;
  if (!o.config.out.empty()) {
    trace_file.open(o.config.out);
    if (!trace_file) throw IoError("cannot open '" + o.config.out + "' for writing");
    trace = &trace_file;
  }
  std::unique_ptr<std::ofstream> swaps;
  if (!swap_log.empty()) {
    swaps = std::make_unique<std::ofstream>(swap_log);
    if (!*swaps) throw IoError("cannot open '" + swap_log + "' for writing");
  }
  const DriveStats stats = write_trace(o.config, o.config.ks[0], 0, steps, *trace, swaps.get());
  if (!*trace || (swaps && !*swaps)) throw IoError("failed writing trace output");
  std::cerr << stats.steps << " steps, " << stats.probes << " probes, " << stats.forfeited << " forfeited\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Top-k tracking on evolving total orders"};
  app.require_subcommand(1);

  RunOptions run_opts;
  auto* run = app.add_subcommand("run", "Run trials and summarize accuracy");
  add_experiment_options(run, run_opts);
  run->add_option("--out", run_opts.config.out, "Output file");
  run->add_option("--format", run_opts.format, "csv: sampled records; json: summary")
      ->check(CLI::IsMember({"csv", "json"}));

  RunOptions cal_opts;
  std::vector<double> sweep{1, 2, 4, 8};
  std::string cal_out;
  auto* calibrate = app.add_subcommand("calibrate", "Sweep c = c' and report accuracy");
  add_experiment_options(calibrate, cal_opts);
  calibrate->add_option("--sweep", sweep, "Constants to try")->delimiter(',');
  calibrate->add_option("--out", cal_out, "JSON report");

  std::vector<int> only;
  int verify_threads = 0;
  auto* verify_cmd = app.add_subcommand("verify", "Run the acceptance suite");
  verify_cmd->add_option("--only", only, "Criterion ids to run")->delimiter(',')->check(CLI::Range(1, 13));
  verify_cmd->add_option("--threads", verify_threads, "Worker threads (0: OpenMP default)");

  RunOptions trace_opts;
  trace_opts.config.ks.clear();
  std::uint64_t steps = 10'000;
  std::string swap_log;
  auto* trace = app.add_subcommand("trace", "Write a per-step driver trace as CSV");
  add_experiment_options(trace, trace_opts);
  trace->add_option("--steps", steps, "Steps to drive");
  trace->add_option("--out", trace_opts.config.out, "Trace CSV (default stdout)");
  trace->add_option("--swap-log", swap_log, "Swap event CSV");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitConfig;
  }

  try {
    if (*run) return cmd_run(run_opts);
    if (*calibrate) return cmd_calibrate(cal_opts, sweep, cal_out);
    if (*verify_cmd) return cmd_verify(only, verify_threads);
    if (*trace) return cmd_trace(trace_opts, steps, swap_log);
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const std::invalid_argument& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const IoError& e) {
    std::cerr << "i/o error: " << e.what() << '\n';
    return kExitIo;
  }
  return 0;
}
