#include <gtest/gtest.h>

#include <algorithm>
#include <set>
#include <vector>

#include "evosort/metrics.hpp"
#include "evosort/reference.hpp"
#include "evosort/topk.hpp"

namespace evosort {
namespace {

TopKParams params(std::size_t n, std::size_t k, ModelKind model = ModelKind::Consecutive, std::uint32_t alpha = 1,
                  double c = 4.0) {
  TopKParams p;
  p.n = n;
  p.k = k;
  p.model = model;
  p.alpha = alpha;
  p.c = c;
  p.c_prime = c;
  return p;
}

EvolutionModel model_of(const TopKParams& p) { return {p.model, p.alpha}; }

std::vector<ElementId> sorted(std::vector<ElementId> v) {
  std::sort(v.begin(), v.end());
  return v;
}

TEST(TopKParams, Margins) {
  EXPECT_EQ(set_margin(params(2000, 10)), 31u);
  EXPECT_EQ(set_margin(params(2000, 10, ModelKind::Consecutive, 2)), 61u);
  EXPECT_EQ(set_margin(params(2000, 10, ModelKind::Gaussian, 1, 2.0)), 42u);
  EXPECT_EQ(selection_margin(params(10000, 10)), 37u);
  EXPECT_EQ(set_margin(params(2000, 10, ModelKind::Consecutive, 0)), 0u);
  EXPECT_EQ(set_margin(params(4, 1)), 4u);  // clipped to n
}

TEST(TopKParams, LocalSortBlock) {
  EXPECT_EQ(local_sort_block(params(10000, 10)), 17u);
  EXPECT_EQ(local_sort_block(params(10000, 10, ModelKind::Gaussian)), 50u);
  EXPECT_EQ(local_sort_block(params(2000, 10, ModelKind::Gaussian, 1, 2.0)), 24u);
}

TEST(LaneSchedule, Residues) {
  const auto set = LaneSchedule::top_k_set();
  EXPECT_EQ(set.lane_for(1), LaneId::QS1);
  EXPECT_EQ(set.lane_for(2), LaneId::QS2);
  EXPECT_EQ(set.lane_for(7), LaneId::QS1);

  const auto sel = LaneSchedule::top_k_selection();
  EXPECT_EQ(sel.lane_for(1), LaneId::QS1);
  EXPECT_EQ(sel.lane_for(2), LaneId::QS2);
  EXPECT_EQ(sel.lane_for(3), LaneId::QS3);
  EXPECT_EQ(sel.lane_for(4), LaneId::LocalSort);
  EXPECT_EQ(sel.lane_for(9), LaneId::QS1);

  const auto gauss = LaneSchedule::gaussian_selection();
  EXPECT_EQ(gauss.lane_for(1), LaneId::QS1);
  EXPECT_EQ(gauss.lane_for(2), LaneId::QS2);
  EXPECT_EQ(gauss.lane_for(3), LaneId::LocalSort);
}

TEST(InterleavedAlgorithm, RejectsBadParameters) {
  EXPECT_THROW(InterleavedAlgorithm::top_k_set(params(1, 1), Rng(1)), ConfigError);
  EXPECT_THROW(InterleavedAlgorithm::top_k_set(params(10, 0), Rng(1)), ConfigError);
  EXPECT_THROW(InterleavedAlgorithm::top_k_set(params(10, 11), Rng(1)), ConfigError);
  EXPECT_THROW(InterleavedAlgorithm::top_k_set(params(10, 2, ModelKind::Consecutive, 1, 0.0), Rng(1)), ConfigError);
  auto p = params(10, 2);
  p.c_prime = -1;
  EXPECT_THROW(InterleavedAlgorithm::top_k_selection(p, Rng(1)), ConfigError);
  EXPECT_NO_THROW(InterleavedAlgorithm::top_k_set(p, Rng(1)));
}

struct StaticCase {
  Problem problem;
  ModelKind model;
  std::size_t n;
  std::size_t k;
};

class StaticExactness : public ::testing::TestWithParam<StaticCase> {};

TEST_P(StaticExactness, ConvergesToTruth) {
  const auto& sc = GetParam();
  const auto p = params(sc.n, sc.k, sc.model, 0);
  for (std::uint64_t seed = 1; seed <= 3; ++seed) {
    EvolvingOrder world(sc.n, model_of(p), seed);
    auto algo = InterleavedAlgorithm::make(sc.problem, p, Rng(seed * 77));
    const auto stats = drive(world, algo, 100 * sc.n * 12);
    EXPECT_EQ(stats.budget_violations, 0u);
    const auto& est = algo.published();
    const auto rec = measure(est, world.truth(), sc.k, world.time());
    ASSERT_FALSE(rec.warming_up);
    EXPECT_TRUE(rec.set_ok);
    if (sc.problem == Problem::Selection) {
      EXPECT_EQ(est.kind, EstimateKind::Order);
      EXPECT_EQ(est.elements, reference::true_top_k(world.truth(), sc.k));
    } else {
      EXPECT_EQ(est.kind, EstimateKind::Set);
      EXPECT_EQ(sorted(est.elements), sorted(reference::true_top_k(world.truth(), sc.k)));
    }
  }
}

INSTANTIATE_TEST_SUITE_P(
    Cases, StaticExactness,
    ::testing::Values(StaticCase{Problem::Set, ModelKind::Consecutive, 200, 1},
                      StaticCase{Problem::Set, ModelKind::Consecutive, 200, 37},
                      StaticCase{Problem::Set, ModelKind::Consecutive, 200, 200},
                      StaticCase{Problem::Set, ModelKind::Gaussian, 200, 50},
                      StaticCase{Problem::Selection, ModelKind::Consecutive, 200, 1},
                      StaticCase{Problem::Selection, ModelKind::Consecutive, 200, 64},
                      StaticCase{Problem::Selection, ModelKind::Consecutive, 200, 200},
                      StaticCase{Problem::Selection, ModelKind::Gaussian, 200, 20},
                      StaticCase{Problem::Selection, ModelKind::Gaussian, 2, 2}));

TEST(InterleavedAlgorithm, ZeroStepsLeavesWarmingUp) {
  EvolvingOrder world(50, EvolutionModel::consecutive(1), 3);
  auto algo = InterleavedAlgorithm::top_k_selection(params(50, 5), Rng(3));
  const auto stats = drive(world, algo, 0);
  EXPECT_EQ(stats.steps, 0u);
  EXPECT_EQ(stats.probes, 0u);
  EXPECT_EQ(algo.published().kind, EstimateKind::WarmingUp);
  EXPECT_EQ(world.time(), 0u);
}

TEST(InterleavedAlgorithm, WarmUpFollowsPipelineOrder) {
  for (auto model : {ModelKind::Consecutive, ModelKind::Gaussian}) {
    const auto p = params(300, 20, model);
    EvolvingOrder world(300, model_of(p), 11);
    auto algo = InterleavedAlgorithm::top_k_selection(p, Rng(11));
    std::vector<LaneId> first_completion;
    std::vector<bool> seen(4, false);
    std::uint64_t first_publish = 0;
    drive(world, algo, 60'000, [&](const StepOutcome& out, const InterleavedAlgorithm& a, const EvolvingOrder&) {
      for (auto id : {LaneId::QS1, LaneId::QS2, LaneId::QS3, LaneId::LocalSort}) {
        const auto i = static_cast<std::size_t>(id);
        if (!seen[i] && a.lane_stats(id).completions > 0) {
          seen[i] = true;
          first_completion.push_back(id);
        }
      }
      if (out.published && first_publish == 0) first_publish = out.t;
      if (first_publish == 0) {
        EXPECT_EQ(a.published().kind, EstimateKind::WarmingUp);
      }
    });
    std::vector<LaneId> expected{LaneId::QS1, LaneId::QS2, LaneId::QS3, LaneId::LocalSort};
    if (model == ModelKind::Gaussian) expected = {LaneId::QS1, LaneId::QS2, LaneId::LocalSort};
    EXPECT_EQ(first_completion, expected);
    EXPECT_GT(first_publish, 0u);
    EXPECT_EQ(algo.schedule().lane_for(first_publish), LaneId::LocalSort);
  }
}

TEST(InterleavedAlgorithm, GaussianSelectionNeverRunsQs3) {
  const auto p = params(300, 30, ModelKind::Gaussian);
  EvolvingOrder world(300, model_of(p), 2);
  auto algo = InterleavedAlgorithm::top_k_selection(p, Rng(2));
  drive(world, algo, 50'000);
  EXPECT_EQ(algo.schedule().modulus, 3u);
  EXPECT_EQ(algo.lane_stats(LaneId::QS3).starts, 0u);
  EXPECT_EQ(algo.lane_stats(LaneId::QS3).probes, 0u);
  EXPECT_GT(algo.lane_stats(LaneId::LocalSort).completions, 0u);
}

TEST(InterleavedAlgorithm, IsDeterministicGivenSeeds) {
  auto run = [] {
    const auto p = params(400, 40);
    EvolvingOrder world(400, model_of(p), 5);
    auto algo = InterleavedAlgorithm::top_k_selection(p, Rng(6));
    std::vector<ComparisonRequest> probes;
    drive(world, algo, 30'000, [&](const StepOutcome& out, const InterleavedAlgorithm&, const EvolvingOrder&) {
      if (out.probed) probes.push_back(out.request);
    });
    return std::make_pair(probes, algo.published().elements);
  };
  const auto a = run();
  const auto b = run();
  EXPECT_EQ(a.first.size(), b.first.size());
  EXPECT_TRUE(std::equal(a.first.begin(), a.first.end(), b.first.begin(), b.first.end(),
                         [](auto x, auto y) { return x.a == y.a && x.b == y.b; }));
  EXPECT_EQ(a.second, b.second);
}

TEST(InterleavedAlgorithm, OneProbePerStepAtMost) {
  for (auto problem : {Problem::Set, Problem::Selection}) {
    const auto p = params(500, 50, ModelKind::Consecutive, 3);
    EvolvingOrder world(500, model_of(p), 9);
    auto algo = InterleavedAlgorithm::make(problem, p, Rng(9));
    const auto stats = drive(world, algo, 40'000, [](const StepOutcome&, const InterleavedAlgorithm&,
                                                     const EvolvingOrder& w) { ASSERT_LE(w.probes_this_step(), 1u); });
    EXPECT_EQ(stats.budget_violations, 0u);
    EXPECT_EQ(stats.integrity_violations, 0u);
    EXPECT_EQ(stats.probes + stats.forfeited, stats.steps);
    EXPECT_EQ(stats.probes, algo.probes());
    EXPECT_EQ(stats.forfeited, algo.forfeited());
    EXPECT_EQ(world.probes_total(), stats.probes);
  }
}

TEST(InterleavedAlgorithm, QuicksortLanesRestartOnCompletion) {
  const auto p = params(200, 20);
  EvolvingOrder world(200, model_of(p), 4);
  auto algo = InterleavedAlgorithm::top_k_selection(p, Rng(4));
  drive(world, algo, 40'000, [](const StepOutcome& out, const InterleavedAlgorithm& a, const EvolvingOrder&) {
    const auto& qs1 = a.lane_stats(LaneId::QS1);
    if (out.t >= 1) {
      EXPECT_EQ(qs1.starts, qs1.completions + 1);
    }
  });
  EXPECT_GT(algo.lane_stats(LaneId::QS1).restarts(), 2u);
  // Steps owned by a lane: probes + forfeits.
  for (auto id : {LaneId::QS1, LaneId::QS2, LaneId::QS3, LaneId::LocalSort}) {
    const auto& s = algo.lane_stats(id);
    EXPECT_EQ(s.probes + s.forfeited, 10'000u) << to_string(id);
  }
  EXPECT_EQ(algo.lane_stats(LaneId::QS1).forfeited, 0u);
  EXPECT_GT(algo.lane_stats(LaneId::QS2).forfeited, 0u);
}

// Every set QS2 publishes is drawn from the window it was started with, even
// though QS1 republishes the window while QS2 is running.
TEST(InterleavedAlgorithm, SetLanesOnlySeeMailboxSnapshots) {
  const std::size_t n = 400, k = 60;
  const auto p = params(n, k, ModelKind::Consecutive, 2);
  EvolvingOrder world(n, model_of(p), 13);
  auto algo = InterleavedAlgorithm::top_k_set(p, Rng(13));
  std::uint64_t qs2_starts = 0;
  std::set<ElementId> window;
  std::size_t checked = 0;
  drive(world, algo, 200'000, [&](const StepOutcome& out, const InterleavedAlgorithm& a, const EvolvingOrder&) {
    // Publication happens before the restart within the same step.
    if (out.published) {
      ASSERT_EQ(a.published().elements.size(), k);
      for (ElementId e : a.published().elements) ASSERT_TRUE(window.count(e)) << "t=" << out.t;
      ++checked;
    }
    if (a.lane_stats(LaneId::QS2).starts != qs2_starts) {
      qs2_starts = a.lane_stats(LaneId::QS2).starts;
      const auto& order = a.last_qs1_order();
      window.clear();
      window.insert(order.begin(), order.begin() + static_cast<std::ptrdiff_t>(std::min(n, k + a.margin())));
    }
  });
  EXPECT_GT(checked, 5u);
}

TEST(InterleavedAlgorithm, SelectionPublishesPermutationOfSomeSelectedSet) {
  const std::size_t n = 300, k = 25;
  const auto p = params(n, k);
  EvolvingOrder world(n, model_of(p), 17);
  auto algo = InterleavedAlgorithm::top_k_selection(p, Rng(17));
  std::set<std::vector<ElementId>> history;
  std::uint64_t qs2_done = 0;
  std::size_t checked = 0;
  drive(world, algo, 150'000, [&](const StepOutcome& out, const InterleavedAlgorithm& a, const EvolvingOrder&) {
    if (a.lane_stats(LaneId::QS2).completions != qs2_done) {
      qs2_done = a.lane_stats(LaneId::QS2).completions;
      ASSERT_EQ(a.selected().size(), k);
      history.insert(sorted({a.selected().begin(), a.selected().end()}));
      ASSERT_EQ(a.candidates().size(), std::min(n, k + a.margin()));
    }
    if (out.published) {
      ASSERT_TRUE(history.count(sorted(a.published().elements)));
      ++checked;
    }
  });
  EXPECT_GT(checked, 5u);
}

TEST(InterleavedAlgorithm, ZeroMarginPublishesQs1Prefix) {
  const auto p = params(100, 10, ModelKind::Consecutive, 0);
  EXPECT_EQ(set_margin(p), 0u);
  EvolvingOrder world(100, model_of(p), 1);
  auto algo = InterleavedAlgorithm::top_k_set(p, Rng(1));
  drive(world, algo, 20'000);
  EXPECT_EQ(algo.lane_stats(LaneId::QS2).probes, 0u);
  EXPECT_EQ(sorted(algo.published().elements), sorted(reference::true_top_k(world.truth(), 10)));
}

}  // namespace
}  // namespace evosort
