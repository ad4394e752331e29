#pragma once

// Serial brute-force references kept for testing the fast paths. Nothing in
// the library proper calls these.

#include <cstdint>
#include <span>
#include <vector>

#include "evosort/evolving_order.hpp"
#include "evosort/types.hpp"

namespace evosort::reference {

/// O(k^2) pair enumeration straight from the definition.
inline std::uint64_t kendall_tau_pairs(std::span<const ElementId> pred, const Permutation& truth) {
  std::uint64_t count = 0;
  for (std::size_t i = 0; i < pred.size(); ++i) {
    for (std::size_t j = i + 1; j < pred.size(); ++j) {
      // pred places pred[i] above pred[j]; truth disagrees when pred[j] outranks it.
      if (truth.rank_of(pred[j]) < truth.rank_of(pred[i])) ++count;
    }
  }
  return count;
}

/// Direct scan: for every covered element, count covered elements that truly
/// outrank it to get its subset-relative rank.
inline std::uint64_t max_rank_displacement_scan(std::span<const ElementId> ranked, const Permutation& truth) {
  std::uint64_t worst = 0;
  for (std::size_t i = 0; i < ranked.size(); ++i) {
    std::uint64_t rel = 0;
    for (ElementId other : ranked) {
      if (truth.rank_of(other) < truth.rank_of(ranked[i])) ++rel;
    }
    const std::uint64_t d = rel > i ? rel - i : i - rel;
    if (d > worst) worst = d;
  }
  return worst;
}

/// True decreasing order of a subset, via full selection over the ranking.
inline std::vector<ElementId> true_order(std::span<const ElementId> items, const Permutation& truth) {
  std::vector<bool> wanted(truth.size(), false);
  for (ElementId e : items) wanted[e] = true;
  std::vector<ElementId> out;
  for (ElementId e : truth.ranking()) {
    if (wanted[e]) out.push_back(e);
  }
  return out;
}

inline std::vector<ElementId> true_top_k(const Permutation& truth, std::size_t k) {
  return {truth.ranking().begin(), truth.ranking().begin() + static_cast<std::ptrdiff_t>(k)};
}

}  // namespace evosort::reference
