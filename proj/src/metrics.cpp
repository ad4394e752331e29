#include "evosort/metrics.hpp"

#include <algorithm>
#include <stdexcept>
#include <vector>

namespace evosort {
namespace {

// Sorts v ascending and returns the number of inversions.
std::uint64_t count_inversions(std::vector<Rank>& v) {
  std::vector<Rank> tmp(v.size());
  std::uint64_t inversions = 0;
  const std::size_t n = v.size();
  for (std::size_t width = 1; width < n; width *= 2) {
    for (std::size_t lo = 0; lo < n - width; lo += 2 * width) {
      const std::size_t mid = lo + width;
      const std::size_t hi = std::min(lo + 2 * width, n);
      std::size_t i = lo, j = mid, out = lo;
      while (i < mid && j < hi) {
        if (v[j] < v[i]) {
          inversions += mid - i;
          tmp[out++] = v[j++];
        } else {
          tmp[out++] = v[i++];
        }
      }
      while (i < mid) tmp[out++] = v[i++];
      while (j < hi) tmp[out++] = v[j++];
      std::copy(tmp.begin() + static_cast<std::ptrdiff_t>(lo), tmp.begin() + static_cast<std::ptrdiff_t>(hi),
                v.begin() + static_cast<std::ptrdiff_t>(lo));
    }
  }
  return inversions;
}

std::vector<Rank> true_ranks(std::span<const ElementId> elems, const Permutation& truth) {
  std::vector<Rank> ranks;
  ranks.reserve(elems.size());
  for (ElementId e : elems) {
    if (e >= truth.size()) throw std::out_of_range("element id out of range");
    ranks.push_back(truth.rank_of(e));
  }
  return ranks;
}

}  // namespace

std::uint64_t kendall_tau_restricted(std::span<const ElementId> pred, const Permutation& truth) {
  std::vector<Rank> ranks = true_ranks(pred, truth);
  const std::uint64_t inversions = count_inversions(ranks);
  if (std::adjacent_find(ranks.begin(), ranks.end()) != ranks.end()) {
    throw std::invalid_argument("kendall tau: predicted list has duplicates");
  }
  return inversions;
}

bool topk_set_correct(std::span<const ElementId> pred_set, const Permutation& truth, std::size_t k) {
  if (pred_set.size() != k) throw std::invalid_argument("top-k set check: |pred_set| != k");
  std::vector<bool> seen(k, false);
  for (ElementId e : pred_set) {
    if (e >= truth.size()) return false;
    const Rank r = truth.rank_of(e);
    if (r >= k || seen[r]) return false;
    seen[r] = true;
  }
  return true;
}

std::uint64_t max_rank_displacement(std::span<const ElementId> ranked, const Permutation& truth) {
  std::vector<std::pair<Rank, std::size_t>> by_truth;
  by_truth.reserve(ranked.size());
  for (std::size_t i = 0; i < ranked.size(); ++i) by_truth.emplace_back(truth.rank_of(ranked[i]), i);
  std::sort(by_truth.begin(), by_truth.end());
  std::uint64_t worst = 0;
  for (std::size_t rel = 0; rel < by_truth.size(); ++rel) {
    const std::size_t est = by_truth[rel].second;
    worst = std::max<std::uint64_t>(worst, rel > est ? rel - est : est - rel);
  }
  return worst;
}

ErrorRecord measure(const TopKEstimate& est, const Permutation& truth, std::size_t k, std::uint64_t t) {
  ErrorRecord rec;
  rec.t = t;
  if (est.kind == EstimateKind::WarmingUp) return rec;
  rec.warming_up = false;
  rec.set_ok = topk_set_correct(est.elements, truth, k);
  std::uint64_t worst = 0;
  if (est.kind == EstimateKind::Order) {
    rec.kt = kendall_tau_restricted(est.elements, truth);
    for (std::size_t i = 0; i < est.elements.size(); ++i) {
      const Rank r = truth.rank_of(est.elements[i]);
      worst = std::max<std::uint64_t>(worst, r > i ? r - i : i - r);
    }
  } else {
    for (ElementId e : est.elements) {
      const Rank r = truth.rank_of(e);
      if (r >= k) worst = std::max<std::uint64_t>(worst, r - (k - 1));
    }
  }
  rec.max_disp = worst;
  return rec;
}

}  // namespace evosort
