#include "evosort/evolving_order.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace evosort {

std::string to_string(ModelKind kind) {
  return kind == ModelKind::Consecutive ? "consecutive" : "gaussian";
}

ModelKind parse_model_kind(const std::string& text) {
  if (text == "consecutive") return ModelKind::Consecutive;
  if (text == "gaussian") return ModelKind::Gaussian;
  throw ConfigError("unknown model '" + text + "' (expected consecutive|gaussian)");
}

Permutation Permutation::identity(std::size_t n) {
  Permutation p;
  p.element_at_.resize(n);
  std::iota(p.element_at_.begin(), p.element_at_.end(), ElementId{0});
  p.rank_of_ = p.element_at_;
  return p;
}

Permutation Permutation::uniform(std::size_t n, Rng& rng) {
  Permutation p = identity(n);
  for (std::size_t i = n; i > 1; --i) {
    const auto j = static_cast<std::size_t>(rng.below(i));
    std::swap(p.element_at_[i - 1], p.element_at_[j]);
  }
  for (std::size_t r = 0; r < n; ++r) p.rank_of_[p.element_at_[r]] = static_cast<Rank>(r);
  return p;
}

Permutation Permutation::from_ranking(std::vector<ElementId> element_at) {
  const std::size_t n = element_at.size();
  Permutation p;
  p.rank_of_.assign(n, static_cast<Rank>(n));
  for (std::size_t r = 0; r < n; ++r) {
    const ElementId e = element_at[r];
    if (e >= n || p.rank_of_[e] != n) throw std::invalid_argument("ranking is not a permutation of 0..n-1");
    p.rank_of_[e] = static_cast<Rank>(r);
  }
  p.element_at_ = std::move(element_at);
  return p;
}

void Permutation::swap_ranks(Rank a, Rank b) noexcept {
  std::swap(element_at_[a], element_at_[b]);
  rank_of_[element_at_[a]] = a;
  rank_of_[element_at_[b]] = b;
}

bool Permutation::consistent_at(Rank r) const noexcept {
  const ElementId e = element_at_[r];
  return e < size() && rank_of_[e] == r;
}

bool Permutation::is_bijection() const {
  const std::size_t n = size();
  if (rank_of_.size() != n) return false;
  std::vector<bool> seen(n, false);
  for (std::size_t r = 0; r < n; ++r) {
    const ElementId e = element_at_[r];
    if (e >= n || seen[e] || rank_of_[e] != r) return false;
    seen[e] = true;
  }
  return true;
}

double gaussian_weight(std::size_t d) {
  const auto x = static_cast<double>(d);
  return std::exp(-0.5 * x * x);
}

std::vector<double> gaussian_distance_cdf(std::size_t n) {
  if (n < 2) throw std::invalid_argument("gaussian distance support needs n >= 2");
  std::vector<double> cdf(n - 1);
  double acc = 0.0;
  for (std::size_t d = 1; d < n; ++d) {
    acc += gaussian_weight(d);
    cdf[d - 1] = acc;
  }
  for (double& v : cdf) v /= acc;
  cdf.back() = 1.0;
  return cdf;
}

EvolvingOrder::EvolvingOrder(std::size_t n, EvolutionModel model, std::uint64_t seed, InitialOrder init)
    : perm_(Permutation::identity(n < 2 ? 0 : n)),
      model_(model),
      evo_rng_(derive_seed(seed, 0, StreamTag::Evolution)) {
  if (n < 2) throw std::invalid_argument("an evolving order needs n >= 2");
  if (init == InitialOrder::Uniform) {
    Rng init_rng(derive_seed(seed, 0, StreamTag::Init));
    perm_ = Permutation::uniform(n, init_rng);
  }
  if (model_.kind == ModelKind::Gaussian) cdf_ = gaussian_distance_cdf(n);
  events_.reserve(model_.alpha);
}

std::optional<std::string> EvolvingOrder::model_warning(const EvolutionModel& model) {
  if (model.kind == ModelKind::Gaussian && model.alpha != 1) {
    return "gaussian swapping is analyzed for constant alpha; running with alpha=" +
           std::to_string(model.alpha);
  }
  return std::nullopt;
}

std::pair<Rank, Rank> EvolvingOrder::sample_swap_pair() {
  const std::size_t n = perm_.size();
  if (model_.kind == ModelKind::Consecutive) {
    const auto lo = static_cast<Rank>(evo_rng_.below(n - 1));
    return {lo, lo + 1};
  }
  const double u = evo_rng_.unit();
  const auto it = std::upper_bound(cdf_.begin(), cdf_.end(), u);
  const auto d = static_cast<Rank>((it - cdf_.begin()) + 1);
  const auto lo = static_cast<Rank>(evo_rng_.below(n - d));
  return {lo, lo + d};
}

std::span<const SwapEvent> EvolvingOrder::advance_time() {
  events_.clear();
  ++t_;
  for (std::uint32_t i = 0; i < model_.alpha; ++i) {
    const auto [lo, hi] = sample_swap_pair();
    perm_.swap_ranks(lo, hi);
    if (!perm_.consistent_at(lo) || !perm_.consistent_at(hi)) ++integrity_violations_;
    events_.push_back({t_, lo, hi});
  }
  swaps_applied_ += model_.alpha;
  probes_this_step_ = 0;
  return events_;
}

Ordering EvolvingOrder::probe_compare(ElementId a, ElementId b) {
  if (a == b) throw std::invalid_argument("probe_compare needs two distinct elements");
  if (a >= n() || b >= n()) throw std::out_of_range("probe_compare element id out of range");
  ++probes_this_step_;
  ++probes_total_;
  return perm_.rank_of(a) < perm_.rank_of(b) ? Ordering::FirstLarger : Ordering::SecondLarger;
}

}  // namespace evosort
