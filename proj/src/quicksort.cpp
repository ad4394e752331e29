#include "evosort/quicksort.hpp"

#include <algorithm>
#include <stdexcept>

namespace evosort {

OrderEstimate::OrderEstimate(std::vector<ElementId> ranked) : ranked_(std::move(ranked)) {
  as_rank_.reserve(ranked_.size());
  for (std::size_t i = 0; i < ranked_.size(); ++i) {
    if (!as_rank_.emplace(ranked_[i], static_cast<Rank>(i)).second) {
      throw std::invalid_argument("order estimate has duplicate elements");
    }
  }
}

QuicksortRun::QuicksortRun(std::vector<ElementId> items, Rng rng) : buf_(std::move(items)), rng_(rng) {
  if (buf_.empty()) throw std::invalid_argument("quick-sort needs at least one item");
  std::vector<ElementId> sorted(buf_);
  std::sort(sorted.begin(), sorted.end());
  if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end()) {
    throw std::invalid_argument("quick-sort items must be distinct");
  }
  larger_.reserve(buf_.size());
  smaller_.reserve(buf_.size());
  stack_.push_back({0, buf_.size()});
  begin_next_segment();
}

void QuicksortRun::begin_next_segment() {
  while (!stack_.empty()) {
    const Segment seg = stack_.back();
    stack_.pop_back();
    if (seg.hi - seg.lo < 2) continue;
    lo_ = seg.lo;
    hi_ = seg.hi;
    const std::size_t p = lo_ + static_cast<std::size_t>(rng_.below(hi_ - lo_));
    std::swap(buf_[lo_], buf_[p]);
    pivot_ = buf_[lo_];
    scan_ = lo_ + 1;
    larger_.clear();
    smaller_.clear();
    return;
  }
  done_ = true;
}

std::optional<ComparisonRequest> QuicksortRun::pending() const {
  if (done_) return std::nullopt;
  return ComparisonRequest{buf_[scan_], pivot_};
}

void QuicksortRun::feed(Ordering answer) {
  if (done_) throw std::logic_error("quick-sort run is already done");
  (answer == Ordering::FirstLarger ? larger_ : smaller_).push_back(buf_[scan_]);
  ++scan_;
  ++comparisons_;
  if (scan_ < hi_) return;

  auto out = std::copy(larger_.begin(), larger_.end(), buf_.begin() + static_cast<std::ptrdiff_t>(lo_));
  *out++ = pivot_;
  std::copy(smaller_.begin(), smaller_.end(), out);
  const std::size_t pivot_pos = lo_ + larger_.size();
  stack_.push_back({pivot_pos + 1, hi_});
  stack_.push_back({lo_, pivot_pos});
  begin_next_segment();
}

std::span<const ElementId> QuicksortRun::ranked() const {
  if (!done_) throw std::logic_error("quick-sort run has not finished");
  return buf_;
}

}  // namespace evosort
