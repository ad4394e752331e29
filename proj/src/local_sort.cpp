#include "evosort/local_sort.hpp"

#include <algorithm>
#include <stdexcept>

namespace evosort {

MaximumFind::MaximumFind(std::vector<ElementId> block) : block_(std::move(block)) {
  if (block_.empty()) throw std::invalid_argument("maximum-find needs a non-empty block");
}

std::optional<ComparisonRequest> MaximumFind::pending() const {
  if (done()) return std::nullopt;
  return ComparisonRequest{block_[champion_], block_[scan_]};
}

void MaximumFind::feed(Ordering answer) {
  if (done()) throw std::logic_error("maximum-find is already done");
  if (answer == Ordering::SecondLarger) champion_ = scan_;
  ++scan_;
  ++comparisons_;
}

LocalSortRun::LocalSortRun(std::vector<ElementId> order, std::size_t block_size)
    : input_(std::move(order)), block_size_(block_size) {
  if (block_size_ == 0) throw std::invalid_argument("local-sort block size must be >= 1");
  if (input_.empty()) {
    done_ = true;
    return;
  }
  next_input_ = std::min(block_size_, input_.size());
  block_.assign(input_.begin(), input_.begin() + static_cast<std::ptrdiff_t>(next_input_));
  output_.reserve(input_.size());
  finder_.emplace(block_);
  settle();
}

// Resolves every round that needs no comparison (singleton blocks).
void LocalSortRun::settle() {
  while (finder_ && finder_->done()) {
    const std::size_t winner = finder_->champion_index();
    output_.push_back(block_[winner]);
    block_.erase(block_.begin() + static_cast<std::ptrdiff_t>(winner));
    if (next_input_ < input_.size()) block_.push_back(input_[next_input_++]);
    if (block_.empty()) {
      finder_.reset();
      done_ = true;
    } else {
      finder_.emplace(block_);
    }
  }
}

std::optional<ComparisonRequest> LocalSortRun::pending() const {
  if (done_) return std::nullopt;
  return finder_->pending();
}

void LocalSortRun::feed(Ordering answer) {
  if (done_) throw std::logic_error("local-sort run is already done");
  finder_->feed(answer);
  ++comparisons_;
  settle();
}

}  // namespace evosort
