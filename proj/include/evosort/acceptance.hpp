#pragma once

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <set>
#include <span>
#include <string>
#include <vector>

#include "evosort/evolving_order.hpp"
#include "evosort/quicksort.hpp"

namespace evosort::verify {

struct ChiSquare {
  double statistic = 0.0;
  unsigned dof = 0;
  double p_value = 1.0;
};

/// Pearson goodness-of-fit of observed counts against cell probabilities.
/// Trailing cells with expected count below 5 are merged into their
/// predecessor before the statistic is formed.
ChiSquare chi_square_gof(std::span<const std::uint64_t> observed, std::span<const double> probs);

/// Probe budget and permutation consistency totals over everything a
/// verification run drove.
struct AuditTally {
  std::uint64_t steps = 0;
  std::uint64_t budget_violations = 0;
  std::uint64_t integrity_violations = 0;
};

/// Result of one randomized quick-sort over all elements of an evolving
/// world, one probe per time step.
struct SortUnderEvolution {
  std::size_t comparisons = 0;
  std::uint64_t max_displacement = 0;  // against the truth at completion
};

SortUnderEvolution sort_under_evolution(EvolvingOrder& world, Rng rng, AuditTally& tally);

struct CriterionResult {
  int id = 0;
  std::string title;
  bool passed = false;
  std::string detail;
  double seconds = 0.0;
};

struct Options {
  std::set<int> only;  // empty: all criteria
  int threads = 0;
};

constexpr int kCriterionCount = 13;

/// Runs the selected acceptance criteria. `on_result` fires as each finishes.
std::vector<CriterionResult> run_acceptance(const Options& options,
                                            const std::function<void(const CriterionResult&)>& on_result = {});

std::string format_result(const CriterionResult& r);

}  // namespace evosort::verify
