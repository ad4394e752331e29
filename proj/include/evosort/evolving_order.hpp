#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "evosort/rng.hpp"
#include "evosort/types.hpp"

namespace evosort {

/// A total order over elements 0..n-1, kept as two mutually inverse arrays.
class Permutation {
 public:
  static Permutation identity(std::size_t n);
  static Permutation uniform(std::size_t n, Rng& rng);
  /// Builds from element_at (rank -> element). Throws if not a permutation.
  static Permutation from_ranking(std::vector<ElementId> element_at);

  std::size_t size() const noexcept { return element_at_.size(); }
  Rank rank_of(ElementId e) const { return rank_of_[e]; }
  ElementId element_at(Rank r) const { return element_at_[r]; }
  /// Elements in decreasing order (position 0 is the largest).
  std::span<const ElementId> ranking() const noexcept { return element_at_; }

  void swap_ranks(Rank a, Rank b) noexcept;

  /// O(1) check that the entries at rank r agree in both directions.
  bool consistent_at(Rank r) const noexcept;
  /// O(n) bijection check.
  bool is_bijection() const;

  friend bool operator==(const Permutation&, const Permutation&) = default;

 private:
  Permutation() = default;
  std::vector<Rank> rank_of_;
  std::vector<ElementId> element_at_;
};

struct EvolutionModel {
  ModelKind kind = ModelKind::Consecutive;
  std::uint32_t alpha = 1;  // swaps per time step; 0 freezes the world

  static EvolutionModel consecutive(std::uint32_t alpha) { return {ModelKind::Consecutive, alpha}; }
  static EvolutionModel gaussian(std::uint32_t alpha) { return {ModelKind::Gaussian, alpha}; }
};

/// Unnormalized swap-distance weight e^{-d^2/2}.
double gaussian_weight(std::size_t d);

/// Cumulative distribution of the swap distance over d = 1..n-1; entry i
/// holds Pr(D <= i+1). The final entry is exactly 1.
std::vector<double> gaussian_distance_cdf(std::size_t n);

struct SwapEvent {
  std::uint64_t time = 0;
  Rank rank_lo = 0;
  Rank rank_hi = 0;
  Rank distance() const noexcept { return rank_hi - rank_lo; }
  friend bool operator==(const SwapEvent&, const SwapEvent&) = default;
};

enum class InitialOrder : std::uint8_t { Uniform, Identity };

/// The simulated world: a permutation that evolves by random swaps and is
/// observed only through truthful pairwise probes.
class EvolvingOrder {
 public:
  EvolvingOrder(std::size_t n, EvolutionModel model, std::uint64_t seed,
                InitialOrder init = InitialOrder::Uniform);

  /// Non-fatal remarks about a model configuration (the simulator accepts
  /// Gaussian swapping with alpha != 1 but it is outside the analyzed range).
  static std::optional<std::string> model_warning(const EvolutionModel& model);

  std::size_t n() const noexcept { return perm_.size(); }
  const EvolutionModel& model() const noexcept { return model_; }
  std::uint64_t time() const noexcept { return t_; }
  std::uint64_t swaps_applied() const noexcept { return swaps_applied_; }
  std::span<const double> gaussian_cdf() const noexcept { return cdf_; }

  /// Draws a rank pair (lo, hi) from the swap distribution without applying it.
  std::pair<Rank, Rank> sample_swap_pair();

  /// Applies alpha sequential swaps and advances the clock by one step. The
  /// returned view is valid until the next call.
  std::span<const SwapEvent> advance_time();

  /// Swaps applied by the most recent advance_time.
  std::span<const SwapEvent> last_events() const noexcept { return events_; }

  /// Truthful comparison under the current order.
  Ordering probe_compare(ElementId a, ElementId b);

  std::uint64_t probes_this_step() const noexcept { return probes_this_step_; }
  std::uint64_t probes_total() const noexcept { return probes_total_; }
  /// Local inverse-map inconsistencies seen after swaps; always 0 unless broken.
  std::uint64_t integrity_violations() const noexcept { return integrity_violations_; }

  /// Ground truth for metrics. Never handed to algorithms.
  const Permutation& truth() const noexcept { return perm_; }
  Permutation oracle_snapshot() const { return perm_; }

 private:
  Permutation perm_;
  EvolutionModel model_;
  std::vector<double> cdf_;
  Rng evo_rng_;
  std::uint64_t t_ = 0;
  std::uint64_t swaps_applied_ = 0;
  std::uint64_t probes_this_step_ = 0;
  std::uint64_t probes_total_ = 0;
  std::uint64_t integrity_violations_ = 0;
  std::vector<SwapEvent> events_;
};

}  // namespace evosort
