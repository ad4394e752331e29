#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>

#include "evosort/evolving_order.hpp"
#include "evosort/topk.hpp"
#include "evosort/types.hpp"

namespace evosort {

/// Pairs of `pred` (largest first) whose relative order disagrees with their
/// global ranks in `truth`. Computed by merge-sort inversion counting.
/// Throws std::invalid_argument on duplicates.
std::uint64_t kendall_tau_restricted(std::span<const ElementId> pred, const Permutation& truth);

/// True iff pred_set is exactly the k largest elements of truth.
/// Throws std::invalid_argument when |pred_set| != k.
bool topk_set_correct(std::span<const ElementId> pred_set, const Permutation& truth, std::size_t k);

/// Max |true rank - estimated rank| over the covered elements. True ranks are
/// taken relative to the covered subset, which is the global rank when the
/// estimate covers every element.
std::uint64_t max_rank_displacement(std::span<const ElementId> ranked, const Permutation& truth);

/// One sampled measurement of a published estimate against the truth.
struct ErrorRecord {
  std::uint64_t t = 0;
  bool warming_up = true;
  bool set_ok = false;
  std::optional<std::uint64_t> kt;        // order estimates only
  std::optional<std::uint64_t> max_disp;  // absent while warming up

  friend bool operator==(const ErrorRecord&, const ErrorRecord&) = default;
};

/// For order estimates max_disp is max |global true rank - position|. For set
/// estimates it is how far the worst member's true rank falls below k.
ErrorRecord measure(const TopKEstimate& est, const Permutation& truth, std::size_t k, std::uint64_t t);

}  // namespace evosort
