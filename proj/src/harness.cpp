#include "evosort/harness.hpp"

#include <omp.h>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <exception>
#include <fstream>
#include <istream>
#include <json.hpp>
#include <ostream>
#include <sstream>

namespace evosort {

std::uint64_t min_horizon(std::size_t n) {
  return static_cast<std::uint64_t>(std::ceil(20.0 * static_cast<double>(n) * std::log(static_cast<double>(n))));
}

std::vector<std::string> validate(const ExperimentConfig& config) {
  if (config.n < 2) throw ConfigError("--n must be at least 2");
  if (config.ks.empty()) throw ConfigError("--k needs at least one value");
  for (std::size_t k : config.ks) {
    if (k < 1 || k > config.n) throw ConfigError("--k values must lie in [1, n]; got " + std::to_string(k));
  }
  if (config.trials < 1) throw ConfigError("--trials must be at least 1");
  if (config.sample_every < 1) throw ConfigError("--sample-every must be at least 1");
  if (!(config.c > 0.0) || !(config.c_prime > 0.0)) throw ConfigError("--c and --cprime must be positive");
  const std::uint64_t need = min_horizon(config.n);
  if (config.horizon <= need) {
    throw ConfigError("--horizon must exceed the warm-up bound 20 n ln n = " + std::to_string(need));
  }
  std::vector<std::string> warnings;
  if (auto w = EvolvingOrder::model_warning({config.model, config.alpha})) warnings.push_back(*w);
  if (config.alpha == 0) warnings.emplace_back("alpha=0: static world");
  return warnings;
}

TrialResult run_trial(const ExperimentConfig& config, std::size_t k, std::uint32_t trial_index) {
  const TopKParams params{config.n, k, config.model, config.alpha, config.c, config.c_prime};
  EvolvingOrder world(config.n, {config.model, config.alpha},
                      derive_seed(config.master_seed, trial_index, StreamTag::Evolution), config.init);
  auto algo = InterleavedAlgorithm::make(config.problem, params,
                                         Rng(derive_seed(config.master_seed, trial_index, StreamTag::Algorithm)));

  TrialResult result;
  result.k = k;
  result.trial = trial_index;
  result.records.reserve(config.horizon / config.sample_every + 1);
  result.drive = drive(world, algo, config.horizon,
                       [&](const StepOutcome& out, const InterleavedAlgorithm& a, const EvolvingOrder& w) {
                         const bool warm = a.published().kind != EstimateKind::WarmingUp;
                         if (warm && !result.warmup_step) result.warmup_step = out.t;
                         if (out.t % config.sample_every == 0) {
                           if (!w.truth().is_bijection()) ++result.bijection_failures;
                           result.records.push_back(measure(a.published(), w.truth(), k, out.t));
                         }
                       });
  return result;
}

DriveStats write_trace(const ExperimentConfig& config, std::size_t k, std::uint32_t trial_index, std::uint64_t steps,
                       std::ostream& trace, std::ostream* swap_log) {
  const TopKParams params{config.n, k, config.model, config.alpha, config.c, config.c_prime};
  EvolvingOrder world(config.n, {config.model, config.alpha},
                      derive_seed(config.master_seed, trial_index, StreamTag::Evolution), config.init);
  auto algo = InterleavedAlgorithm::make(config.problem, params,
                                         Rng(derive_seed(config.master_seed, trial_index, StreamTag::Algorithm)));
  trace << "step,lane,probe_a,probe_b,answer,estimate_kind,kt,set_ok\n";
  if (swap_log) *swap_log << "time,rank_lo,rank_hi,distance\n";
  return drive(world, algo, steps, [&](const StepOutcome& out, const InterleavedAlgorithm& a, const EvolvingOrder& w) {
    if (swap_log) {
      for (const SwapEvent& e : w.last_events()) {
        *swap_log << e.time << ',' << e.rank_lo << ',' << e.rank_hi << ',' << e.distance() << '\n';
      }
    }
    trace << out.t << ',' << to_string(out.lane) << ',';
    if (out.probed) {
      trace << out.request.a << ',' << out.request.b << ','
            << (out.answer == Ordering::FirstLarger ? "first" : "second");
    } else {
      trace << ",,forfeit";
    }
    const ErrorRecord rec = measure(a.published(), w.truth(), k, out.t);
    trace << ',' << to_string(a.published().kind) << ',';
    if (rec.kt) trace << *rec.kt;
    trace << ',';
    if (!rec.warming_up) trace << (rec.set_ok ? 1 : 0);
    trace << '\n';
  });
}

double quantile_sorted(std::span<const double> sorted, double q) {
  if (sorted.empty()) return std::nan("");
  const double pos = q * static_cast<double>(sorted.size() - 1);
  const auto lo = static_cast<std::size_t>(std::floor(pos));
  const std::size_t hi = std::min(lo + 1, sorted.size() - 1);
  return sorted[lo] + (pos - static_cast<double>(lo)) * (sorted[hi] - sorted[lo]);
}

RecordStats summarize_records(std::span<const ErrorRecord> records) {
  RecordStats s;
  std::uint64_t set_ok = 0;
  std::uint64_t kt_zero = 0;
  double kt_sum = 0.0;
  std::vector<double> kts;
  for (const ErrorRecord& r : records) {
    if (r.warming_up) continue;
    ++s.samples;
    if (r.set_ok) ++set_ok;
    if (r.kt) {
      kts.push_back(static_cast<double>(*r.kt));
      kt_sum += static_cast<double>(*r.kt);
      if (*r.kt == 0) ++kt_zero;
    }
  }
  if (s.samples > 0) s.p_set_ok = static_cast<double>(set_ok) / static_cast<double>(s.samples);
  if (!kts.empty()) {
    std::sort(kts.begin(), kts.end());
    const auto m = static_cast<double>(kts.size());
    s.p_kt_zero = static_cast<double>(kt_zero) / m;
    s.kt_mean = kt_sum / m;
    s.kt_median = quantile_sorted(kts, 0.5);
    s.kt_p95 = quantile_sorted(kts, 0.95);
  }
  return s;
}

namespace {

struct Task {
  std::size_t k;
  std::uint32_t trial;
};

}  // namespace

ExperimentResult run_experiment(const ExperimentConfig& config, Execution mode) {
  validate(config);
  std::vector<Task> tasks;
  for (std::size_t k : config.ks) {
    for (std::uint32_t i = 0; i < config.trials; ++i) tasks.push_back({k, i});
  }

  ExperimentResult result;
  result.trials.resize(tasks.size());
  std::vector<double> seconds(tasks.size(), 0.0);
  std::vector<std::exception_ptr> errors(tasks.size());
  const auto count = static_cast<std::ptrdiff_t>(tasks.size());

  auto run_one = [&](std::ptrdiff_t i) {
    const auto begin = std::chrono::steady_clock::now();
    try {
      result.trials[i] = run_trial(config, tasks[i].k, tasks[i].trial);
    } catch (...) {
      errors[i] = std::current_exception();
    }
    seconds[i] = std::chrono::duration<double>(std::chrono::steady_clock::now() - begin).count();
  };

  if (mode == Execution::Serial) {
    for (std::ptrdiff_t i = 0; i < count; ++i) run_one(i);
  } else {
    const int threads = config.threads > 0 ? config.threads : omp_get_max_threads();
#pragma omp parallel for schedule(dynamic, 1) num_threads(threads)
    for (std::ptrdiff_t i = 0; i < count; ++i) run_one(i);
  }
  for (const auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }

  std::size_t offset = 0;
  for (std::size_t k : config.ks) {
    SummaryStats s;
    s.model = config.model;
    s.n = config.n;
    s.k = k;
    s.alpha = config.alpha;
    s.trials = config.trials;
    std::vector<ErrorRecord> pooled;
    for (std::uint32_t i = 0; i < config.trials; ++i) {
      const TrialResult& tr = result.trials[offset + i];
      pooled.insert(pooled.end(), tr.records.begin(), tr.records.end());
      s.warmup_steps_observed = std::max(s.warmup_steps_observed, tr.warmup_step.value_or(config.horizon));
      s.probes_forfeited += tr.drive.forfeited;
      s.budget_violations += tr.drive.budget_violations;
      s.integrity_violations += tr.drive.integrity_violations + tr.bijection_failures;
      s.wall_time_s += seconds[offset + i];
    }
    s.records = summarize_records(pooled);
    result.summaries.push_back(s);
    offset += config.trials;
  }

  if (!config.out.empty()) {
    if (config.format == OutputFormat::Csv) {
      std::ostringstream os;
      write_records_csv(os, config, result.trials);
      write_file(config.out, os.str());
    } else {
      write_file(config.out, summaries_json(result.summaries));
    }
  }
  return result;
}

void write_records_csv(std::ostream& os, const ExperimentConfig& config, std::span<const TrialResult> trials) {
  os << "model,n,k,alpha,trial,t,warming_up,set_ok,kt,max_disp\n";
  const std::string model = to_string(config.model);
  for (const TrialResult& tr : trials) {
    for (const ErrorRecord& r : tr.records) {
      os << model << ',' << config.n << ',' << tr.k << ',' << config.alpha << ',' << tr.trial << ',' << r.t << ','
         << (r.warming_up ? 1 : 0) << ',';
      if (!r.warming_up) os << (r.set_ok ? 1 : 0);
      os << ',';
      if (r.kt) os << *r.kt;
      os << ',';
      if (r.max_disp) os << *r.max_disp;
      os << '\n';
    }
  }
}

namespace {

std::vector<std::string> split_csv(const std::string& line) {
  std::vector<std::string> fields;
  std::string field;
  std::istringstream ss(line);
  while (std::getline(ss, field, ',')) fields.push_back(field);
  if (!line.empty() && line.back() == ',') fields.emplace_back();
  return fields;
}

std::uint64_t parse_u64(const std::string& s, std::size_t line_no) {
  std::size_t used = 0;
  unsigned long long v = 0;
  try {
    v = std::stoull(s, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (s.empty() || used != s.size()) {
    throw IoError("csv line " + std::to_string(line_no) + ": bad integer '" + s + "'");
  }
  return v;
}

bool parse_flag(const std::string& s, std::size_t line_no) {
  if (s == "0") return false;
  if (s == "1") return true;
  throw IoError("csv line " + std::to_string(line_no) + ": bad flag '" + s + "'");
}

}  // namespace

std::vector<CsvRow> read_records_csv(std::istream& is) {
  std::string line;
  if (!std::getline(is, line) || line != "model,n,k,alpha,trial,t,warming_up,set_ok,kt,max_disp") {
    throw IoError("csv: missing or unexpected header");
  }
  std::vector<CsvRow> rows;
  std::size_t line_no = 1;
  while (std::getline(is, line)) {
    ++line_no;
    if (line.empty()) continue;
    const auto f = split_csv(line);
    if (f.size() != 10) throw IoError("csv line " + std::to_string(line_no) + ": expected 10 fields");
    CsvRow row;
    row.model = f[0];
    row.n = parse_u64(f[1], line_no);
    row.k = parse_u64(f[2], line_no);
    row.alpha = static_cast<std::uint32_t>(parse_u64(f[3], line_no));
    row.trial = static_cast<std::uint32_t>(parse_u64(f[4], line_no));
    row.record.t = parse_u64(f[5], line_no);
    row.record.warming_up = parse_flag(f[6], line_no);
    if (!row.record.warming_up) row.record.set_ok = parse_flag(f[7], line_no);
    if (!f[8].empty()) row.record.kt = parse_u64(f[8], line_no);
    if (!f[9].empty()) row.record.max_disp = parse_u64(f[9], line_no);
    rows.push_back(std::move(row));
  }
  return rows;
}

std::string summaries_json(std::span<const SummaryStats> summaries) {
  using nlohmann::ordered_json;
  auto opt = [](const std::optional<double>& v) { return v ? ordered_json(*v) : ordered_json(nullptr); };
  ordered_json arr = ordered_json::array();
  for (const SummaryStats& s : summaries) {
    ordered_json o;
    o["model"] = to_string(s.model);
    o["n"] = s.n;
    o["k"] = s.k;
    o["alpha"] = s.alpha;
    o["trials"] = s.trials;
    o["samples"] = s.records.samples;
    o["p_set_ok"] = s.records.p_set_ok;
    o["p_kt_zero"] = opt(s.records.p_kt_zero);
    o["kt_mean"] = opt(s.records.kt_mean);
    o["kt_median"] = opt(s.records.kt_median);
    o["kt_p95"] = opt(s.records.kt_p95);
    o["warmup_steps_observed"] = s.warmup_steps_observed;
    o["probes_forfeited"] = s.probes_forfeited;
    o["budget_violations"] = s.budget_violations;
    o["integrity_violations"] = s.integrity_violations;
    o["wall_time_s"] = s.wall_time_s;
    arr.push_back(std::move(o));
  }
  return arr.dump(2) + "\n";
}

void write_file(const std::string& path, const std::string& contents) {
  std::ofstream f(path, std::ios::binary | std::ios::trunc);
  if (!f) throw IoError("cannot open '" + path + "' for writing");
  f << contents;
  f.flush();
  if (!f) throw IoError("failed writing '" + path + "'");
}

}  // namespace evosort
