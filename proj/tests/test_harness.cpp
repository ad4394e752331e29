#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <nlohmann/json.hpp>
#include <sstream>
#include <string>
#include <vector>

#include "evosort/harness.hpp"

namespace evosort {
namespace {

ExperimentConfig small_config() {
  ExperimentConfig c;
  c.n = 200;
  c.ks = {5, 40};
  c.horizon = min_horizon(200) + 1000;
  c.trials = 3;
  c.master_seed = 42;
  c.sample_every = 13;
  return c;
}

std::string csv_of(const ExperimentConfig& config, const ExperimentResult& r) {
  std::ostringstream os;
  write_records_csv(os, config, r.trials);
  return os.str();
}

TEST(Harness, ZeroHorizonTrialHasNoRecords) {
  auto c = small_config();
  c.horizon = 0;
  const auto t = run_trial(c, 0);
  EXPECT_TRUE(t.records.empty());
  EXPECT_FALSE(t.warmup_step);
  EXPECT_EQ(t.drive.steps, 0u);
}

TEST(Harness, TrialsAreDeterministicAndSeedDependent) {
  const auto c = small_config();
  const auto a = run_trial(c, 5, 1);
  const auto b = run_trial(c, 5, 1);
  EXPECT_EQ(a.records, b.records);
  EXPECT_EQ(a.warmup_step, b.warmup_step);
  const auto other = run_trial(c, 5, 2);
  EXPECT_NE(a.records, other.records);
}

TEST(Harness, StaticWorldIsExactAfterWarmUp) {
  for (auto problem : {Problem::Set, Problem::Selection}) {
    auto c = small_config();
    c.alpha = 0;
    c.problem = problem;
    c.sample_every = 1;
    const auto t = run_trial(c, 40, 0);
    ASSERT_TRUE(t.warmup_step);
    for (const auto& rec : t.records) {
      if (rec.warming_up) continue;
      EXPECT_TRUE(rec.set_ok) << "t=" << rec.t;
      if (problem == Problem::Selection) EXPECT_EQ(rec.kt, 0u);
    }
  }
}

TEST(Harness, RecordsAreSampledOnSchedule) {
  const auto c = small_config();
  const auto t = run_trial(c, 5, 0);
  ASSERT_EQ(t.records.size(), c.horizon / c.sample_every);
  for (std::size_t i = 0; i < t.records.size(); ++i) EXPECT_EQ(t.records[i].t, (i + 1) * c.sample_every);
  EXPECT_EQ(t.bijection_failures, 0u);
  EXPECT_EQ(t.drive.budget_violations, 0u);
}

TEST(Harness, ValidateRejectsBadConfigs) {
  auto bad = [](auto mutate) {
    auto c = small_config();
    mutate(c);
    return c;
  };
  EXPECT_THROW(validate(bad([](auto& c) { c.n = 1; })), ConfigError);
  EXPECT_THROW(validate(bad([](auto& c) { c.ks = {}; })), ConfigError);
  EXPECT_THROW(validate(bad([](auto& c) { c.ks = {0}; })), ConfigError);
  EXPECT_THROW(validate(bad([](auto& c) { c.ks = {201}; })), ConfigError);
  EXPECT_THROW(validate(bad([](auto& c) { c.trials = 0; })), ConfigError);
  EXPECT_THROW(validate(bad([](auto& c) { c.sample_every = 0; })), ConfigError);
  EXPECT_THROW(validate(bad([](auto& c) { c.c = 0; })), ConfigError);
  EXPECT_THROW(validate(bad([](auto& c) { c.c_prime = -2; })), ConfigError);
  EXPECT_THROW(validate(bad([](auto& c) { c.horizon = min_horizon(c.n); })), ConfigError);
  EXPECT_THROW(run_experiment(bad([](auto& c) { c.trials = 0; })), ConfigError);
  EXPECT_TRUE(validate(small_config()).empty());
}

TEST(Harness, ValidateWarns) {
  auto c = small_config();
  c.alpha = 0;
  EXPECT_EQ(validate(c).size(), 1u);
  c.model = ModelKind::Gaussian;
  c.alpha = 3;
  EXPECT_EQ(validate(c).size(), 1u);
  c.alpha = 1;
  EXPECT_TRUE(validate(c).empty());
}

TEST(Harness, MinHorizon) { EXPECT_EQ(min_horizon(1000), 138156u); }

TEST(Harness, Quantiles) {
  const std::vector<double> v{1, 2, 3, 4};
  EXPECT_DOUBLE_EQ(quantile_sorted(v, 0.0), 1.0);
  EXPECT_DOUBLE_EQ(quantile_sorted(v, 1.0), 4.0);
  EXPECT_DOUBLE_EQ(quantile_sorted(v, 0.5), 2.5);
  EXPECT_DOUBLE_EQ(quantile_sorted(std::vector<double>{7}, 0.95), 7.0);
  EXPECT_TRUE(std::isnan(quantile_sorted(std::vector<double>{}, 0.5)));
}

TEST(Harness, SummarizeRecords) {
  std::vector<ErrorRecord> recs(5);
  recs[0] = {1, true, false, std::nullopt, std::nullopt};
  recs[1] = {2, false, true, 0, 0};
  recs[2] = {3, false, true, 2, 1};
  recs[3] = {4, false, false, 0, 3};
  recs[4] = {5, false, true, 4, 2};
  const auto s = summarize_records(recs);
  EXPECT_EQ(s.samples, 4u);
  EXPECT_DOUBLE_EQ(s.p_set_ok, 0.75);
  EXPECT_DOUBLE_EQ(*s.p_kt_zero, 0.5);
  EXPECT_DOUBLE_EQ(*s.kt_mean, 1.5);
  EXPECT_DOUBLE_EQ(*s.kt_median, 1.0);
  EXPECT_FALSE(summarize_records(std::vector<ErrorRecord>{recs[0]}).p_kt_zero);
}

TEST(Harness, SerialAndParallelAgree) {
  const auto c = small_config();
  const auto par = run_experiment(c, Execution::Parallel);
  const auto ser = run_experiment(c, Execution::Serial);
  EXPECT_EQ(csv_of(c, par), csv_of(c, ser));
  ASSERT_EQ(par.summaries.size(), 2u);
  for (std::size_t i = 0; i < 2; ++i) {
    EXPECT_EQ(par.summaries[i].records, ser.summaries[i].records);
    EXPECT_EQ(par.summaries[i].warmup_steps_observed, ser.summaries[i].warmup_steps_observed);
  }
}

TEST(Harness, CsvRoundTripPreservesStats) {
  const auto c = small_config();
  const auto r = run_experiment(c, Execution::Serial);
  const std::string text = csv_of(c, r);
  EXPECT_EQ(text.substr(0, text.find('\n')), "model,n,k,alpha,trial,t,warming_up,set_ok,kt,max_disp");
  std::istringstream is(text);
  const auto rows = read_records_csv(is);
  for (const auto& summary : r.summaries) {
    std::vector<ErrorRecord> recs;
    for (const auto& row : rows) {
      if (row.k == summary.k) recs.push_back(row.record);
    }
    EXPECT_EQ(summarize_records(recs), summary.records);
  }
  std::size_t total = 0;
  for (const auto& t : r.trials) total += t.records.size();
  EXPECT_EQ(rows.size(), total);
}

TEST(Harness, CsvReaderRejectsGarbage) {
  std::istringstream bad_header("a,b,c\n");
  EXPECT_THROW(read_records_csv(bad_header), IoError);
  std::istringstream bad_row("model,n,k,alpha,trial,t,warming_up,set_ok,kt,max_disp\nconsecutive,10,x,1,0,1,0,1,,\n");
  EXPECT_THROW(read_records_csv(bad_row), IoError);
}

TEST(Harness, WritesJsonSummary) {
  auto c = small_config();
  const auto path = std::filesystem::temp_directory_path() / ("evosort_json_" + std::to_string(::testing::UnitTest::GetInstance()->random_seed()) + ".json");
  c.out = path.string();
  c.format = OutputFormat::Json;
  run_experiment(c);
  std::ifstream f(path);
  const auto j = nlohmann::json::parse(f);
  ASSERT_EQ(j.size(), 2u);
  for (const char* key : {"model", "n", "k", "alpha", "trials", "samples", "p_set_ok", "p_kt_zero", "kt_mean",
                          "kt_median", "kt_p95", "warmup_steps_observed", "probes_forfeited", "budget_violations",
                          "integrity_violations", "wall_time_s"}) {
    EXPECT_TRUE(j[0].contains(key)) << key;
  }
  EXPECT_EQ(j[1]["k"], 40);
  EXPECT_EQ(j[0]["budget_violations"], 0);
  std::filesystem::remove(path);
}

TEST(Harness, UnwritableOutputRaisesIoError) {
  auto c = small_config();
  c.trials = 1;
  c.out = "/nonexistent-dir/x.csv";
  EXPECT_THROW(run_experiment(c), IoError);
}

TEST(Harness, TraceHasOneRowPerStep) {
  auto c = small_config();
  std::ostringstream trace, swaps;
  const auto stats = write_trace(c, 5, 0, 500, trace, &swaps);
  EXPECT_EQ(stats.steps, 500u);
  auto lines = [](const std::string& s) { return std::count(s.begin(), s.end(), '\n'); };
  EXPECT_EQ(lines(trace.str()), 501);
  EXPECT_EQ(lines(swaps.str()), 501);  // alpha = 1
  EXPECT_EQ(trace.str().substr(0, trace.str().find('\n')), "step,lane,probe_a,probe_b,answer,estimate_kind,kt,set_ok");
}

// Ordering accuracy falls as k grows past the critical size.
TEST(Harness, KtZeroRateFallsWithK) {
  ExperimentConfig c;
  c.n = 10'000;
  c.ks = {10, 100, 1000};
  c.horizon = min_horizon(c.n) + 200'000;
  c.trials = 2;
  c.master_seed = 7;
  const auto r = run_experiment(c);
  ASSERT_EQ(r.summaries.size(), 3u);
  for (std::size_t i = 0; i + 1 < 3; ++i) {
    EXPECT_GE(*r.summaries[i].records.p_kt_zero, *r.summaries[i + 1].records.p_kt_zero);
    EXPECT_LT(*r.summaries[i].records.kt_median, *r.summaries[i + 1].records.kt_median + 1e-9);
  }
  EXPECT_GT(*r.summaries[0].records.p_kt_zero, 0.5);
}

}  // namespace
}  // namespace evosort
