#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <unordered_map>
#include <vector>

#include "evosort/rng.hpp"
#include "evosort/types.hpp"

namespace evosort {

/// An estimated order over a subset of elements, largest first.
class OrderEstimate {
 public:
  explicit OrderEstimate(std::vector<ElementId> ranked);

  std::span<const ElementId> ranked() const noexcept { return ranked_; }
  std::size_t size() const noexcept { return ranked_.size(); }
  /// Estimated 0-based rank of e. Throws std::out_of_range if e is not covered.
  Rank rank_of(ElementId e) const { return as_rank_.at(e); }
  bool contains(ElementId e) const { return as_rank_.contains(e); }

 private:
  std::vector<ElementId> ranked_;
  std::unordered_map<ElementId, Rank> as_rank_;
};

/// Randomized quick-sort as a resumable machine: each feed consumes exactly
/// one comparison answer. Sub-arrays are partitioned one at a time,
/// depth-first, larger side first. Answers that contradict earlier ones are
/// accepted as given, so any answer sequence terminates.
class QuicksortRun {
 public:
  /// Throws std::invalid_argument on empty input or duplicate ids.
  QuicksortRun(std::vector<ElementId> items, Rng rng);

  bool done() const noexcept { return done_; }
  /// Current comparison (candidate, pivot), or nullopt once done. Stable until feed.
  std::optional<ComparisonRequest> pending() const;
  /// Routes the candidate by the answer for pending(). Throws std::logic_error when done.
  void feed(Ordering answer);

  std::size_t size() const noexcept { return buf_.size(); }
  std::size_t comparisons_used() const noexcept { return comparisons_; }

  /// Sorted items, largest first. Throws std::logic_error until done.
  std::span<const ElementId> ranked() const;
  OrderEstimate result() const { return OrderEstimate(std::vector<ElementId>(ranked().begin(), ranked().end())); }

 private:
  struct Segment {
    std::size_t lo;
    std::size_t hi;
  };

  void begin_next_segment();

  std::vector<ElementId> buf_;
  std::vector<Segment> stack_;
  std::vector<ElementId> larger_;
  std::vector<ElementId> smaller_;
  Rng rng_;
  std::size_t lo_ = 0;
  std::size_t hi_ = 0;
  std::size_t scan_ = 0;
  ElementId pivot_ = 0;
  std::size_t comparisons_ = 0;
  bool done_ = false;
};

}  // namespace evosort
