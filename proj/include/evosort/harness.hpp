#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "evosort/evolving_order.hpp"
#include "evosort/metrics.hpp"
#include "evosort/topk.hpp"

namespace evosort {

enum class OutputFormat : std::uint8_t { Csv, Json };

struct ExperimentConfig {
  ModelKind model = ModelKind::Consecutive;
  Problem problem = Problem::Selection;
  std::size_t n = 1000;
  std::vector<std::size_t> ks{10};
  std::uint32_t alpha = 1;
  std::uint64_t horizon = 1'000'000;
  std::uint32_t trials = 1;
  std::uint64_t master_seed = 1;
  double c = 4.0;
  double c_prime = 4.0;
  std::uint64_t sample_every = 97;  // prime, so sampling does not lock onto a lane's residue
  InitialOrder init = InitialOrder::Uniform;
  std::string out;  // empty: no file
  OutputFormat format = OutputFormat::Csv;
  int threads = 0;  // 0: OpenMP default
};

/// Smallest horizon accepted by validate(): 20 n ln n.
std::uint64_t min_horizon(std::size_t n);

/// Throws ConfigError for unusable configurations; returns warnings for
/// accepted-but-unusual ones.
std::vector<std::string> validate(const ExperimentConfig& config);

struct TrialResult {
  std::size_t k = 0;
  std::uint32_t trial = 0;
  std::vector<ErrorRecord> records;
  std::optional<std::uint64_t> warmup_step;  // first step with a published estimate
  DriveStats drive;
  std::uint64_t bijection_failures = 0;  // full O(n) audits run at every sample
};

/// Drives one (world, algorithm) pair for config.horizon steps and samples an
/// ErrorRecord every config.sample_every steps. Seeds come from
/// (master_seed, trial_index, stream tag) only.
TrialResult run_trial(const ExperimentConfig& config, std::size_t k, std::uint32_t trial_index);
inline TrialResult run_trial(const ExperimentConfig& config, std::uint32_t trial_index) {
  return run_trial(config, config.ks.at(0), trial_index);
}

/// Statistics that depend only on the sampled records.
struct RecordStats {
  std::uint64_t samples = 0;  // post-warm-up records
  double p_set_ok = 0.0;
  std::optional<double> p_kt_zero;
  std::optional<double> kt_mean;
  std::optional<double> kt_median;
  std::optional<double> kt_p95;

  friend bool operator==(const RecordStats&, const RecordStats&) = default;
};

RecordStats summarize_records(std::span<const ErrorRecord> records);

/// Linear-interpolation quantile of sorted values, q in [0, 1].
double quantile_sorted(std::span<const double> sorted, double q);

struct SummaryStats {
  ModelKind model = ModelKind::Consecutive;
  std::size_t n = 0;
  std::size_t k = 0;
  std::uint32_t alpha = 0;
  std::uint32_t trials = 0;
  RecordStats records;
  std::uint64_t warmup_steps_observed = 0;  // max over trials; horizon if never warmed up
  std::uint64_t probes_forfeited = 0;
  std::uint64_t budget_violations = 0;
  std::uint64_t integrity_violations = 0;
  double wall_time_s = 0.0;
};

enum class Execution : std::uint8_t { Serial, Parallel };

struct ExperimentResult {
  std::vector<SummaryStats> summaries;  // one per k, in config order
  std::vector<TrialResult> trials;      // k-major, then trial index
};

/// Runs every (k, trial) pair. Parallel execution spreads trials over an
/// OpenMP pool; results are stored by index, so both modes produce the same
/// output. Writes config.out when set (throws IoError on failure).
ExperimentResult run_experiment(const ExperimentConfig& config, Execution mode = Execution::Parallel);

/// CSV header: model,n,k,alpha,trial,t,warming_up,set_ok,kt,max_disp
void write_records_csv(std::ostream& os, const ExperimentConfig& config, std::span<const TrialResult> trials);

struct CsvRow {
  std::string model;
  std::size_t n = 0;
  std::size_t k = 0;
  std::uint32_t alpha = 0;
  std::uint32_t trial = 0;
  ErrorRecord record;
};

/// Parses a file written by write_records_csv. Throws IoError on malformed input.
std::vector<CsvRow> read_records_csv(std::istream& is);

/// Drives trial `trial_index` of `config` for `steps` steps and writes one
/// row per step: step,lane,probe_a,probe_b,answer,estimate_kind,kt,set_ok.
/// When swap_log is set, also writes time,rank_lo,rank_hi,distance per swap.
/// Ids and ranks are 0-based.
DriveStats write_trace(const ExperimentConfig& config, std::size_t k, std::uint32_t trial_index, std::uint64_t steps,
                       std::ostream& trace, std::ostream* swap_log = nullptr);

std::string summaries_json(std::span<const SummaryStats> summaries);

void write_file(const std::string& path, const std::string& contents);

}  // namespace evosort
