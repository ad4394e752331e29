#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

#include "evosort/types.hpp"

namespace evosort {

/// Linear scan for the largest element of a block, one comparison per feed.
class MaximumFind {
 public:
  /// Throws std::invalid_argument on an empty block.
  explicit MaximumFind(std::vector<ElementId> block);

  bool done() const noexcept { return scan_ >= block_.size(); }
  std::optional<ComparisonRequest> pending() const;
  void feed(Ordering answer);

  ElementId champion() const noexcept { return block_[champion_]; }
  std::size_t champion_index() const noexcept { return champion_; }
  std::size_t comparisons_used() const noexcept { return comparisons_; }

 private:
  std::vector<ElementId> block_;
  std::size_t champion_ = 0;
  std::size_t scan_ = 1;
  std::size_t comparisons_ = 0;
};

/// Corrects a nearly sorted order block by block. The block is a sliding
/// window over the input order: each round emits the block's maximum as the
/// next output rank, drops it, and pulls in the next unprocessed input
/// element. Once the input is exhausted the last block is drained.
///
/// In a static world the result is exact whenever no element sits more than
/// block_size - 1 positions after its true rank in the input. The pipelines
/// size blocks as 4c+1 for a displacement bound of c, leaving room for drift
/// while the run is in progress.
class LocalSortRun {
 public:
  /// `order` is the input estimate, largest first. block_size must be >= 1.
  LocalSortRun(std::vector<ElementId> order, std::size_t block_size);

  bool done() const noexcept { return done_; }
  std::optional<ComparisonRequest> pending() const;
  void feed(Ordering answer);

  std::size_t size() const noexcept { return input_.size(); }
  std::size_t block_size() const noexcept { return block_size_; }
  std::size_t comparisons_used() const noexcept { return comparisons_; }
  /// Ranks produced so far; the full corrected order once done.
  std::span<const ElementId> output() const noexcept { return output_; }
  /// Current block contents, for inspection.
  std::span<const ElementId> block() const noexcept { return block_; }

 private:
  void settle();

  std::vector<ElementId> input_;
  std::size_t block_size_;
  std::vector<ElementId> block_;
  std::size_t next_input_ = 0;
  std::optional<MaximumFind> finder_;
  std::vector<ElementId> output_;
  std::size_t comparisons_ = 0;
  bool done_ = false;
};

}  // namespace evosort
