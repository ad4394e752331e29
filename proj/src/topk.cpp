#include "evosort/topk.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace evosort {
namespace {

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

std::size_t ceil_to_size(double x) {
  return x <= 0.0 ? 0 : static_cast<std::size_t>(std::ceil(x));
}

void validate(const TopKParams& p, bool needs_c_prime) {
  if (p.n < 2) throw ConfigError("n must be at least 2");
  if (p.k < 1 || p.k > p.n) throw ConfigError("k must lie in [1, n]");
  if (!(p.c > 0.0) || !std::isfinite(p.c)) throw ConfigError("c must be a positive finite number");
  if (needs_c_prime && (!(p.c_prime > 0.0) || !std::isfinite(p.c_prime))) {
    throw ConfigError("c' must be a positive finite number");
  }
}

std::vector<ElementId> prefix(std::span<const ElementId> s, std::size_t count) {
  return {s.begin(), s.begin() + static_cast<std::ptrdiff_t>(std::min(count, s.size()))};
}

}  // namespace

std::string to_string(Problem p) { return p == Problem::Set ? "set" : "selection"; }

Problem parse_problem(const std::string& text) {
  if (text == "set") return Problem::Set;
  if (text == "selection") return Problem::Selection;
  throw ConfigError("unknown problem '" + text + "' (expected set|selection)");
}

std::string to_string(LaneId lane) {
  switch (lane) {
    case LaneId::QS1: return "QS1";
    case LaneId::QS2: return "QS2";
    case LaneId::QS3: return "QS3";
    case LaneId::LocalSort: return "LocalSort";
  }
  return "?";
}

std::string to_string(EstimateKind kind) {
  switch (kind) {
    case EstimateKind::WarmingUp: return "warming_up";
    case EstimateKind::Set: return "set";
    case EstimateKind::Order: return "order";
  }
  return "?";
}

std::size_t set_margin(const TopKParams& p) {
  const double ln_n = std::log(static_cast<double>(p.n));
  const double m = p.model == ModelKind::Consecutive ? p.c * p.alpha * ln_n : p.c * std::pow(ln_n, 1.5);
  return std::min(ceil_to_size(m), p.n);
}

std::size_t selection_margin(const TopKParams& p) {
  TopKParams q = p;
  q.c = p.c_prime;
  return set_margin(q);
}

std::size_t local_sort_block(const TopKParams& p) {
  const double ln_n = std::log(static_cast<double>(p.n));
  const double width = p.model == ModelKind::Consecutive ? 4.0 * p.c : 4.0 * p.c * std::sqrt(ln_n);
  return ceil_to_size(width) + 1;
}

LaneSchedule LaneSchedule::top_k_set() {
  return {2, {LaneId::QS2, LaneId::QS1, LaneId::QS2, LaneId::QS2}};
}

LaneSchedule LaneSchedule::top_k_selection() {
  return {4, {LaneId::LocalSort, LaneId::QS1, LaneId::QS2, LaneId::QS3}};
}

LaneSchedule LaneSchedule::gaussian_selection() {
  return {3, {LaneId::LocalSort, LaneId::QS1, LaneId::QS2, LaneId::QS2}};
}

InterleavedAlgorithm::InterleavedAlgorithm(Problem problem, const TopKParams& params, LaneSchedule schedule,
                                           Rng rng)
    : problem_(problem), params_(params), schedule_(schedule), rng_(rng) {}

InterleavedAlgorithm InterleavedAlgorithm::top_k_set(const TopKParams& params, Rng alg_rng) {
  validate(params, false);
  InterleavedAlgorithm algo(Problem::Set, params, LaneSchedule::top_k_set(), alg_rng);
  algo.margin_ = set_margin(params);
  return algo;
}

InterleavedAlgorithm InterleavedAlgorithm::top_k_selection(const TopKParams& params, Rng alg_rng) {
  validate(params, true);
  const LaneSchedule schedule = params.model == ModelKind::Consecutive ? LaneSchedule::top_k_selection()
                                                                       : LaneSchedule::gaussian_selection();
  InterleavedAlgorithm algo(Problem::Selection, params, schedule, alg_rng);
  algo.margin_ = selection_margin(params);
  algo.block_size_ = local_sort_block(params);
  return algo;
}

InterleavedAlgorithm InterleavedAlgorithm::make(Problem problem, const TopKParams& params, Rng alg_rng) {
  return problem == Problem::Set ? top_k_set(params, alg_rng) : top_k_selection(params, alg_rng);
}

bool InterleavedAlgorithm::start(LaneId id) {
  Lane& ln = lane(id);
  switch (id) {
    case LaneId::QS1: {
      std::vector<ElementId> all(params_.n);
      std::iota(all.begin(), all.end(), ElementId{0});
      ln.run.emplace<QuicksortRun>(std::move(all), rng_.fork());
      break;
    }
    case LaneId::QS2:
      if (!mail_.has_C) return false;
      if (problem_ == Problem::Set) {
        ln.carried = mail_.L;
        // With a zero margin the window is empty and L already holds all k.
        if (mail_.C.empty()) {
          ln.run.emplace<LocalSortRun>(std::vector<ElementId>{}, 1);
          break;
        }
      }
      ln.run.emplace<QuicksortRun>(mail_.C, rng_.fork());
      break;
    case LaneId::QS3:
      if (!mail_.has_P) return false;
      ln.run.emplace<QuicksortRun>(mail_.P, rng_.fork());
      break;
    case LaneId::LocalSort:
      if (!mail_.has_order_P) return false;
      ln.run.emplace<LocalSortRun>(mail_.order_P, block_size_);
      break;
  }
  ++ln.stats.starts;
  return true;
}

void InterleavedAlgorithm::publish(EstimateKind kind, std::vector<ElementId> elements, std::uint64_t t) {
  published_.kind = kind;
  published_.elements = std::move(elements);
  published_.produced_at = t;
}

void InterleavedAlgorithm::complete(LaneId id, std::uint64_t t) {
  Lane& ln = lane(id);
  const std::size_t n = params_.n;
  const std::size_t k = params_.k;
  switch (id) {
    case LaneId::QS1: {
      const auto& run = std::get<QuicksortRun>(ln.run);
      const auto ranked = run.ranked();
      last_qs1_comparisons_ = run.comparisons_used();
      mail_.qs1_order.assign(ranked.begin(), ranked.end());
      if (problem_ == Problem::Set) {
        const std::size_t lo = k > margin_ ? k - margin_ : 0;
        const std::size_t hi = std::min(n, k + margin_);
        mail_.L = prefix(ranked, lo);
        mail_.C.assign(ranked.begin() + static_cast<std::ptrdiff_t>(lo),
                       ranked.begin() + static_cast<std::ptrdiff_t>(hi));
      } else {
        mail_.C = prefix(ranked, std::min(n, k + margin_));
      }
      mail_.has_C = true;
      break;
    }
    case LaneId::QS2:
      if (problem_ == Problem::Set) {
        std::vector<ElementId> result = std::move(ln.carried);
        ln.carried.clear();
        if (const auto* run = std::get_if<QuicksortRun>(&ln.run)) {
          const auto ranked = run->ranked();
          const std::size_t take = k - result.size();
          result.insert(result.end(), ranked.begin(), ranked.begin() + static_cast<std::ptrdiff_t>(take));
        }
        publish(EstimateKind::Set, std::move(result), t);
      } else {
        mail_.P = prefix(std::get<QuicksortRun>(ln.run).ranked(), k);
        mail_.has_P = true;
        if (params_.model == ModelKind::Gaussian) {
          mail_.order_P = mail_.P;
          mail_.has_order_P = true;
        }
      }
      break;
    case LaneId::QS3: {
      const auto ranked = std::get<QuicksortRun>(ln.run).ranked();
      mail_.order_P.assign(ranked.begin(), ranked.end());
      mail_.has_order_P = true;
      break;
    }
    case LaneId::LocalSort: {
      const auto out = std::get<LocalSortRun>(ln.run).output();
      publish(EstimateKind::Order, {out.begin(), out.end()}, t);
      break;
    }
  }
  ++ln.stats.completions;
  ln.run.emplace<std::monostate>();
}

StepOutcome InterleavedAlgorithm::step(EvolvingOrder& world) {
  StepOutcome out;
  out.t = world.time();
  out.lane = schedule_.lane_for(out.t);
  Lane& ln = lane(out.lane);
  const std::uint64_t produced_before = published_.produced_at;
  const EstimateKind kind_before = published_.kind;

  auto forfeit = [&] {
    ++forfeited_;
    ++ln.stats.forfeited;
    out.published = published_.kind != kind_before || published_.produced_at != produced_before;
    return out;
  };

  if (std::holds_alternative<std::monostate>(ln.run) && !start(out.lane)) return forfeit();

  const auto is_done = [](const Run& r) {
    return std::visit(overloaded{[](const std::monostate&) { return true; },
                                 [](const auto& run) { return run.done(); }},
                      r);
  };
  // Runs that need no comparison at all complete on their own step.
  if (is_done(ln.run)) {
    complete(out.lane, out.t);
    return forfeit();
  }

  const ComparisonRequest req = std::visit(
      overloaded{[](const std::monostate&) { return ComparisonRequest{}; },
                 [](const auto& run) { return *run.pending(); }},
      ln.run);
  const Ordering answer = world.probe_compare(req.a, req.b);
  std::visit(overloaded{[](std::monostate&) {}, [answer](auto& run) { run.feed(answer); }}, ln.run);
  ++probes_;
  ++ln.stats.probes;
  out.probed = true;
  out.request = req;
  out.answer = answer;

  if (is_done(ln.run)) {
    complete(out.lane, out.t);
    out.published = published_.kind != kind_before || published_.produced_at != produced_before;
    start(out.lane);
  }
  return out;
}

DriveStats drive(EvolvingOrder& world, InterleavedAlgorithm& algo, std::uint64_t steps,
                 const StepObserver& observer) {
  DriveStats stats;
  const std::uint64_t integrity_before = world.integrity_violations();
  for (std::uint64_t i = 0; i < steps; ++i) {
    world.advance_time();
    const StepOutcome out = algo.step(world);
    const std::uint64_t probes = world.probes_this_step();
    if (probes > 1) ++stats.budget_violations;
    stats.probes += probes;
    if (!out.probed) ++stats.forfeited;
    ++stats.steps;
    if (observer) observer(out, algo, world);
  }
  stats.integrity_violations = world.integrity_violations() - integrity_before;
  return stats;
}

}  // namespace evosort
