#include "evosort/acceptance.hpp"

#include <algorithm>
#include <boost/math/distributions/chi_squared.hpp>
#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <unistd.h>
#include <iomanip>
#include <iterator>
#include <numeric>
#include <sstream>

#include "evosort/harness.hpp"
#include "evosort/metrics.hpp"
#include "evosort/reference.hpp"

namespace evosort::verify {

ChiSquare chi_square_gof(std::span<const std::uint64_t> observed, std::span<const double> probs) {
  if (observed.size() != probs.size() || observed.size() < 2) {
    throw std::invalid_argument("chi-square needs matching observed/probability cells (>= 2)");
  }
  const double total = static_cast<double>(std::accumulate(observed.begin(), observed.end(), std::uint64_t{0}));
  std::vector<double> obs(observed.begin(), observed.end());
  std::vector<double> exp;
  for (double p : probs) exp.push_back(p * total);
  while (exp.size() > 2 && exp.back() < 5.0) {
    exp[exp.size() - 2] += exp.back();
    obs[obs.size() - 2] += obs.back();
    exp.pop_back();
    obs.pop_back();
  }
  ChiSquare out;
  for (std::size_t i = 0; i < exp.size(); ++i) {
    const double d = obs[i] - exp[i];
    out.statistic += d * d / exp[i];
  }
  out.dof = static_cast<unsigned>(exp.size() - 1);
  const boost::math::chi_squared dist(out.dof);
  out.p_value = boost::math::cdf(boost::math::complement(dist, out.statistic));
  return out;
}

SortUnderEvolution sort_under_evolution(EvolvingOrder& world, Rng rng, AuditTally& tally) {
  std::vector<ElementId> all(world.n());
  std::iota(all.begin(), all.end(), ElementId{0});
  QuicksortRun run(std::move(all), rng);
  const std::uint64_t integrity_before = world.integrity_violations();
  while (!run.done()) {
    world.advance_time();
    ++tally.steps;
    const ComparisonRequest req = *run.pending();
    run.feed(world.probe_compare(req.a, req.b));
    if (world.probes_this_step() > 1) ++tally.budget_violations;
  }
  tally.integrity_violations += world.integrity_violations() - integrity_before;
  if (!world.truth().is_bijection()) ++tally.integrity_violations;
  return {run.comparisons_used(), max_rank_displacement(run.ranked(), world.truth())};
}

namespace {

using Clock = std::chrono::steady_clock;

std::string num(double v, int precision = 4) {
  std::ostringstream os;
  os << std::fixed << std::setprecision(precision) << v;
  return os.str();
}

class Suite {
 public:
  explicit Suite(const Options& options) : options_(options) {}

  CriterionResult run(int id);

 private:
  ExperimentConfig config(ModelKind model, Problem problem, std::size_t n, std::size_t k, std::uint32_t alpha,
                          std::uint64_t horizon, std::uint32_t trials, double c, double c_prime) const {
    ExperimentConfig cfg;
    cfg.model = model;
    cfg.problem = problem;
    cfg.n = n;
    cfg.ks = {k};
    cfg.alpha = alpha;
    cfg.horizon = horizon;
    cfg.trials = trials;
    cfg.master_seed = 20240611;
    cfg.c = c;
    cfg.c_prime = c_prime;
    cfg.threads = options_.threads;
    return cfg;
  }

  void absorb(const TrialResult& tr) {
    tally_.steps += tr.drive.steps;
    tally_.budget_violations += tr.drive.budget_violations;
    tally_.integrity_violations += tr.drive.integrity_violations + tr.bijection_failures;
  }

  SummaryStats experiment(const ExperimentConfig& cfg) {
    const ExperimentResult r = run_experiment(cfg);
    for (const TrialResult& tr : r.trials) absorb(tr);
    return r.summaries.front();
  }

  const std::vector<SortUnderEvolution>& quicksort_runs();

  void static_exactness(CriterionResult& out);
  void kendall_oracle(CriterionResult& out);
  void quicksort_runtime(CriterionResult& out);
  void quicksort_displacement(CriterionResult& out);
  void topk_set_accuracy(CriterionResult& out);
  void selection_small_k(CriterionResult& out);
  void selection_critical(CriterionResult& out);
  void selection_large_k(CriterionResult& out);
  void gaussian_distances(CriterionResult& out);
  void gaussian_set_accuracy(CriterionResult& out);
  void gaussian_selection(CriterionResult& out);
  void determinism(CriterionResult& out);
  void budget(CriterionResult& out);

  Options options_;
  AuditTally tally_;
  std::vector<SortUnderEvolution> qs_runs_;
};

CriterionResult Suite::run(int id) {
  CriterionResult out;
  out.id = id;
  const auto begin = Clock::now();
  switch (id) {
    case 1: static_exactness(out); break;
    case 2: kendall_oracle(out); break;
    case 3: quicksort_runtime(out); break;
    case 4: quicksort_displacement(out); break;
    case 5: topk_set_accuracy(out); break;
    case 6: selection_small_k(out); break;
    case 7: selection_critical(out); break;
    case 8: selection_large_k(out); break;
    case 9: gaussian_distances(out); break;
    case 10: gaussian_set_accuracy(out); break;
    case 11: gaussian_selection(out); break;
    case 12: determinism(out); break;
    case 13: budget(out); break;
    default: throw std::invalid_argument("no acceptance criterion " + std::to_string(id));
  }
  out.seconds = std::chrono::duration<double>(Clock::now() - begin).count();
  return out;
}

// alpha = 0: both pipelines must be exact at every post-warm-up step.
void Suite::static_exactness(CriterionResult& out) {
  out.title = "static world exactness (alpha=0, n=512)";
  std::uint64_t samples = 0;
  std::uint64_t bad = 0;
  std::uint64_t never_warm = 0;
  for (Problem problem : {Problem::Set, Problem::Selection}) {
    for (std::size_t k : {1, 16, 256, 512}) {
      for (std::uint32_t seed = 1; seed <= 5; ++seed) {
        ExperimentConfig cfg = config(ModelKind::Consecutive, problem, 512, k, 0, 100'000, 1, 4.0, 4.0);
        cfg.master_seed = seed;
        cfg.sample_every = 1;
        const TrialResult tr = run_trial(cfg, k, 0);
        absorb(tr);
        if (!tr.warmup_step) ++never_warm;
        for (const ErrorRecord& r : tr.records) {
          if (r.warming_up) continue;
          ++samples;
          if (!r.set_ok || (r.kt && *r.kt != 0)) ++bad;
        }
      }
    }
  }
  out.passed = bad == 0 && never_warm == 0 && samples > 0;
  out.detail = std::to_string(samples) + " post-warm-up steps, " + std::to_string(bad) + " inexact, " +
               std::to_string(never_warm) + " runs never warmed up";
}

void Suite::kendall_oracle(CriterionResult& out) {
  out.title = "kendall tau fast path == O(k^2) enumeration";
  std::uint64_t cases = 0;
  std::uint64_t mismatches = 0;
  for (std::size_t k = 1; k <= 6; ++k) {
    std::vector<ElementId> truth_order(k);
    std::iota(truth_order.begin(), truth_order.end(), ElementId{0});
    do {
      const Permutation truth = Permutation::from_ranking(truth_order);
      std::vector<ElementId> pred(k);
      std::iota(pred.begin(), pred.end(), ElementId{0});
      do {
        ++cases;
        if (kendall_tau_restricted(pred, truth) != reference::kendall_tau_pairs(pred, truth)) ++mismatches;
      } while (std::next_permutation(pred.begin(), pred.end()));
    } while (std::next_permutation(truth_order.begin(), truth_order.end()));
  }
  Rng rng(0x6b74);
  for (int i = 0; i < 1000; ++i) {
    const std::size_t k = 1 + rng.below(12);
    const std::size_t n = k + rng.below(40) + (k < 2 ? 1 : 0);
    const Permutation truth = Permutation::uniform(n, rng);
    std::vector<ElementId> pool(n);
    std::iota(pool.begin(), pool.end(), ElementId{0});
    for (std::size_t j = 0; j < k; ++j) std::swap(pool[j], pool[j + rng.below(n - j)]);
    pool.resize(k);
    ++cases;
    if (kendall_tau_restricted(pool, truth) != reference::kendall_tau_pairs(pool, truth)) ++mismatches;
  }
  out.passed = mismatches == 0;
  out.detail = std::to_string(cases) + " cases, " + std::to_string(mismatches) + " mismatches";
}

const std::vector<SortUnderEvolution>& Suite::quicksort_runs() {
  if (qs_runs_.empty()) {
    for (std::uint64_t i = 0; i < 100; ++i) {
      EvolvingOrder world(4096, EvolutionModel::consecutive(1), derive_seed(4096, i, StreamTag::Evolution));
      qs_runs_.push_back(sort_under_evolution(world, Rng(derive_seed(4096, i, StreamTag::Algorithm)), tally_));
    }
  }
  return qs_runs_;
}

void Suite::quicksort_runtime(CriterionResult& out) {
  out.title = "quick-sort comparisons <= 8 n ln n (consecutive, alpha=1, n=4096)";
  const double bound = 8.0 * 4096 * std::log(4096.0);
  std::size_t within = 0;
  std::size_t worst = 0;
  for (const auto& r : quicksort_runs()) {
    if (static_cast<double>(r.comparisons) <= bound) ++within;
    worst = std::max(worst, r.comparisons);
  }
  out.passed = within >= 99;
  out.detail = std::to_string(within) + "/100 runs within " + num(bound, 0) + " (worst " + std::to_string(worst) +
               ", need >= 99)";
}

void Suite::quicksort_displacement(CriterionResult& out) {
  out.title = "quick-sort max rank displacement <= 40 ln n (consecutive, alpha=1, n=4096)";
  const double bound = 40.0 * std::log(4096.0);
  std::size_t within = 0;
  std::uint64_t worst = 0;
  for (const auto& r : quicksort_runs()) {
    if (static_cast<double>(r.max_displacement) <= bound) ++within;
    worst = std::max(worst, r.max_displacement);
  }
  out.passed = within >= 95;
  out.detail = std::to_string(within) + "/100 runs within " + num(bound, 1) + " (worst " + std::to_string(worst) +
               ", need >= 95)";
}

void Suite::topk_set_accuracy(CriterionResult& out) {
  out.title = "top-k-set accuracy (consecutive, n=2000, alpha=1, c=4)";
  out.passed = true;
  for (std::size_t k : {10, 500, 1900}) {
    const auto s = experiment(config(ModelKind::Consecutive, Problem::Set, 2000, k, 1, 400'000, 10, 4.0, 4.0));
    const bool ok = s.records.samples >= 10'000 && s.records.p_set_ok >= 0.9;
    out.passed = out.passed && ok;
    out.detail += "k=" + std::to_string(k) + ": Pr(set_ok)=" + num(s.records.p_set_ok) + " over " +
                  std::to_string(s.records.samples) + " samples; ";
  }
  out.detail += "need >= 0.9 over >= 10000 samples";
}

void Suite::selection_small_k(CriterionResult& out) {
  out.title = "top-k-selection small k (consecutive, n=10^4, k=10)";
  const auto s = experiment(config(ModelKind::Consecutive, Problem::Selection, 10'000, 10, 1, 2'000'000, 10, 4.0, 4.0));
  const double p = s.records.p_kt_zero.value_or(0.0);
  out.passed = p >= 0.9;
  out.detail = "Pr(kt=0)=" + num(p) + " over " + std::to_string(s.records.samples) + " samples, need >= 0.9";
}

void Suite::selection_critical(CriterionResult& out) {
  out.title = "top-k-selection critical k (consecutive, n=10^4, k=100)";
  const auto s =
      experiment(config(ModelKind::Consecutive, Problem::Selection, 10'000, 100, 1, 2'000'000, 10, 4.0, 4.0));
  const double p = s.records.p_kt_zero.value_or(0.0);
  out.passed = p >= 0.05 && p <= 0.99;
  out.detail = "Pr(kt=0)=" + num(p) + " (median kt " + num(s.records.kt_median.value_or(NAN), 1) +
               "), need within [0.05, 0.99]";
}

void Suite::selection_large_k(CriterionResult& out) {
  out.title = "top-k-selection large k (consecutive, n=10^4, k=2000)";
  const auto s =
      experiment(config(ModelKind::Consecutive, Problem::Selection, 10'000, 2000, 1, 2'000'000, 10, 4.0, 4.0));
  const double bound = 10.0 * 2000.0 * 2000.0 / 10'000.0;
  const double median = s.records.kt_median.value_or(INFINITY);
  const double p = s.records.p_kt_zero.value_or(1.0);
  out.passed = median <= bound && p <= 0.5;
  out.detail = "median kt=" + num(median, 1) + " (need <= " + num(bound, 0) + "), Pr(kt=0)=" + num(p) +
               " (need <= 0.5)";
}

void Suite::gaussian_distances(CriterionResult& out) {
  out.title = "gaussian swap distance distribution (n=1000, 10^6 draws)";
  constexpr std::size_t n = 1000;
  EvolvingOrder world(n, EvolutionModel::gaussian(1), 99);
  std::vector<std::uint64_t> counts(6, 0);
  for (int i = 0; i < 1'000'000; ++i) {
    const auto [lo, hi] = world.sample_swap_pair();
    ++counts[std::min<std::size_t>(hi - lo, 6) - 1];
  }
  // Probabilities straight from the unnormalized weights e^{-d^2/2}.
  double norm = 0.0;
  for (std::size_t d = 1; d < n; ++d) norm += std::exp(-0.5 * static_cast<double>(d * d));
  std::vector<double> probs(6, 0.0);
  for (std::size_t d = 1; d < n; ++d) {
    probs[std::min<std::size_t>(d, 6) - 1] += std::exp(-0.5 * static_cast<double>(d * d)) / norm;
  }
  const ChiSquare chi = chi_square_gof(counts, probs);
  out.passed = chi.p_value > 0.001;
  out.detail = "chi2=" + num(chi.statistic, 3) + " dof=" + std::to_string(chi.dof) + " p=" + num(chi.p_value) +
               ", need p > 0.001";
}

void Suite::gaussian_set_accuracy(CriterionResult& out) {
  out.title = "gaussian top-k-set accuracy (n=2000, alpha=1, k=500, c=2)";
  const auto s = experiment(config(ModelKind::Gaussian, Problem::Set, 2000, 500, 1, 400'000, 10, 2.0, 2.0));
  out.passed = s.records.p_set_ok >= 0.85;
  out.detail = "Pr(set_ok)=" + num(s.records.p_set_ok) + " over " + std::to_string(s.records.samples) +
               " samples, need >= 0.85";
}

void Suite::gaussian_selection(CriterionResult& out) {
  out.title = "gaussian top-k-selection regimes (n=10^4)";
  const auto small = experiment(config(ModelKind::Gaussian, Problem::Selection, 10'000, 10, 1, 2'000'000, 10, 4.0, 4.0));
  const auto large =
      experiment(config(ModelKind::Gaussian, Problem::Selection, 10'000, 2000, 1, 2'000'000, 10, 4.0, 4.0));
  const double p = small.records.p_kt_zero.value_or(0.0);
  const double bound = 10.0 * 2000.0 * 2000.0 * std::log(10'000.0) / 10'000.0;
  const double median = large.records.kt_median.value_or(INFINITY);
  out.passed = p >= 0.85 && median <= bound;
  out.detail = "k=10: Pr(kt=0)=" + num(p) + " (need >= 0.85); k=2000: median kt=" + num(median, 1) +
               " (need <= " + num(bound, 0) + ")";
}

void Suite::determinism(CriterionResult& out) {
  out.title = "byte-identical reruns";
  namespace fs = std::filesystem;
  const fs::path dir = fs::temp_directory_path() / ("evosort-verify-" + std::to_string(::getpid()));
  fs::create_directories(dir);
  auto slurp = [](const fs::path& p) {
    std::ifstream f(p, std::ios::binary);
    return std::string(std::istreambuf_iterator<char>(f), {});
  };
  std::vector<ExperimentConfig> configs;
  {
    ExperimentConfig a = config(ModelKind::Consecutive, Problem::Selection, 300, 5, 1, 40'000, 4, 4.0, 4.0);
    a.ks = {5, 60};
    ExperimentConfig b = config(ModelKind::Gaussian, Problem::Set, 300, 40, 1, 40'000, 3, 2.0, 2.0);
    configs = {a, b};
  }
  bool same = true;
  std::size_t bytes = 0;
  for (std::size_t i = 0; i < configs.size(); ++i) {
    std::vector<std::string> outputs;
    for (Execution mode : {Execution::Parallel, Execution::Parallel, Execution::Serial}) {
      ExperimentConfig cfg = configs[i];
      cfg.out = (dir / ("run" + std::to_string(i) + "-" + std::to_string(outputs.size()) + ".csv")).string();
      const ExperimentResult r = run_experiment(cfg, mode);
      for (const TrialResult& tr : r.trials) absorb(tr);
      outputs.push_back(slurp(cfg.out));
    }
    bytes += outputs.front().size();
    same = same && !outputs.front().empty() && outputs[0] == outputs[1] && outputs[0] == outputs[2];
  }
  fs::remove_all(dir);
  out.passed = same;
  out.detail = std::to_string(configs.size()) + " configs x 3 reruns (parallel, parallel, serial), " +
               std::to_string(bytes) + " bytes each pass, " + (same ? "identical" : "DIFFERENT");
}

void Suite::budget(CriterionResult& out) {
  out.title = "probe budget and permutation bijectivity";
  if (tally_.steps == 0) {
    CriterionResult scratch;
    static_exactness(scratch);
  }
  out.passed = tally_.steps > 0 && tally_.budget_violations == 0 && tally_.integrity_violations == 0;
  out.detail = std::to_string(tally_.steps) + " driven steps, " + std::to_string(tally_.budget_violations) +
               " multi-probe steps, " + std::to_string(tally_.integrity_violations) + " bijection violations";
}

}  // namespace

std::vector<CriterionResult> run_acceptance(const Options& options,
                                            const std::function<void(const CriterionResult&)>& on_result) {
  Suite suite(options);
  std::vector<CriterionResult> results;
  for (int id = 1; id <= kCriterionCount; ++id) {
    if (!options.only.empty() && !options.only.contains(id)) continue;
    results.push_back(suite.run(id));
    if (on_result) on_result(results.back());
  }
  return results;
}

std::string format_result(const CriterionResult& r) {
  std::ostringstream os;
  os << (r.passed ? "[PASS] " : "[FAIL] ") << 'C' << std::setw(2) << std::setfill('0') << r.id << ' ' << r.title
     << " | " << r.detail << " | " << std::fixed << std::setprecision(1) << r.seconds << " s";
  return os.str();
}

}  // namespace evosort::verify
