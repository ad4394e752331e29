#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "evosort/evolving_order.hpp"
#include "evosort/local_sort.hpp"
#include "evosort/quicksort.hpp"
#include "evosort/rng.hpp"
#include "evosort/types.hpp"

namespace evosort {

enum class Problem : std::uint8_t { Set, Selection };

std::string to_string(Problem p);
Problem parse_problem(const std::string& text);

struct TopKParams {
  std::size_t n = 0;
  std::size_t k = 0;
  ModelKind model = ModelKind::Consecutive;
  std::uint32_t alpha = 1;
  double c = 4.0;        // window constant (set margin, local-sort block)
  double c_prime = 4.0;  // candidate-set constant for selection
};

/// Half-width of the candidate window for top-k-set: ceil(c*alpha*ln n)
/// under consecutive swapping, ceil(c*ln^1.5 n) under Gaussian swapping.
std::size_t set_margin(const TopKParams& p);
/// Extra candidates beyond k for top-k-selection (uses c').
std::size_t selection_margin(const TopKParams& p);
/// Local-sort block: ceil(4c)+1, or ceil(4c*sqrt(ln n))+1 under Gaussian swapping.
std::size_t local_sort_block(const TopKParams& p);

enum class LaneId : std::uint8_t { QS1, QS2, QS3, LocalSort };

std::string to_string(LaneId lane);

/// Maps each residue of the time step modulo `modulus` to the lane that owns it.
struct LaneSchedule {
  std::uint32_t modulus = 2;
  std::array<LaneId, 4> by_residue{};

  LaneId lane_for(std::uint64_t t) const { return by_residue[t % modulus]; }

  static LaneSchedule top_k_set();             // odd: QS1, even: QS2
  static LaneSchedule top_k_selection();       // t%4 = 1,2,3,0 -> QS1,QS2,QS3,LocalSort
  static LaneSchedule gaussian_selection();    // t%3 = 1,2,0  -> QS1,QS2,LocalSort
};

enum class EstimateKind : std::uint8_t { WarmingUp, Set, Order };

std::string to_string(EstimateKind kind);

/// The answer an algorithm currently publishes.
struct TopKEstimate {
  EstimateKind kind = EstimateKind::WarmingUp;
  /// Set: the k elements in no particular order. Order: largest first.
  std::vector<ElementId> elements;
  std::uint64_t produced_at = 0;
};

/// What happened on one driven step.
struct StepOutcome {
  std::uint64_t t = 0;
  LaneId lane = LaneId::QS1;
  bool probed = false;
  ComparisonRequest request{};
  Ordering answer = Ordering::FirstLarger;
  bool published = false;
};

struct LaneStats {
  std::uint64_t starts = 0;
  std::uint64_t completions = 0;
  std::uint64_t probes = 0;
  std::uint64_t forfeited = 0;
  std::uint64_t restarts() const noexcept { return starts == 0 ? 0 : starts - 1; }
};

/// Several resumable sub-algorithms (lanes) sharing one probe per time step
/// by residue class. Lanes talk only through the mailbox: each one restarts
/// on the step it completes, from the freshest published inputs. A lane
/// whose inputs do not exist yet forfeits its step.
class InterleavedAlgorithm {
 public:
  /// Two lanes: QS1 sorts everything and publishes L and C; QS2 sorts C and
  /// publishes L plus the top of C. Throws ConfigError on bad k or c.
  static InterleavedAlgorithm top_k_set(const TopKParams& params, Rng alg_rng);
  /// Consecutive swapping: QS1 -> C, QS2 -> P, QS3 -> order over P,
  /// Local-sort -> published order. Gaussian swapping drops QS3 and feeds
  /// QS2's order over P straight to Local-sort.
  static InterleavedAlgorithm top_k_selection(const TopKParams& params, Rng alg_rng);

  static InterleavedAlgorithm make(Problem problem, const TopKParams& params, Rng alg_rng);

  /// Runs the lane scheduled for world.time(). Call once per step, after the
  /// world has advanced. Issues at most one probe.
  StepOutcome step(EvolvingOrder& world);

  const TopKEstimate& published() const noexcept { return published_; }
  Problem problem() const noexcept { return problem_; }
  const TopKParams& params() const noexcept { return params_; }
  const LaneSchedule& schedule() const noexcept { return schedule_; }
  std::size_t margin() const noexcept { return margin_; }
  std::size_t block_size() const noexcept { return block_size_; }
  const LaneStats& lane_stats(LaneId lane) const { return lanes_[static_cast<std::size_t>(lane)].stats; }
  std::uint64_t probes() const noexcept { return probes_; }
  std::uint64_t forfeited() const noexcept { return forfeited_; }
  /// Comparisons spent by the most recently completed QS1 run.
  std::optional<std::size_t> last_qs1_comparisons() const noexcept { return last_qs1_comparisons_; }
  /// Latest candidate set C and selected set P (empty until first published).
  std::span<const ElementId> candidates() const noexcept { return mail_.C; }
  std::span<const ElementId> selected() const noexcept { return mail_.P; }
  /// Order published by the most recently completed QS1 run.
  const std::vector<ElementId>& last_qs1_order() const noexcept { return mail_.qs1_order; }

 private:
  using Run = std::variant<std::monostate, QuicksortRun, LocalSortRun>;

  struct Lane {
    Run run;
    LaneStats stats;
    std::vector<ElementId> carried;  // QS2 of top-k-set: the L matching its C
  };

  struct Mailbox {
    std::vector<ElementId> qs1_order;
    std::vector<ElementId> L;
    std::vector<ElementId> C;
    bool has_C = false;
    std::vector<ElementId> P;  // largest first, in QS2's order
    bool has_P = false;
    std::vector<ElementId> order_P;  // input to Local-sort
    bool has_order_P = false;
  };

  InterleavedAlgorithm(Problem problem, const TopKParams& params, LaneSchedule schedule, Rng rng);

  Lane& lane(LaneId id) { return lanes_[static_cast<std::size_t>(id)]; }
  bool start(LaneId id);
  void complete(LaneId id, std::uint64_t t);
  void publish(EstimateKind kind, std::vector<ElementId> elements, std::uint64_t t);

  Problem problem_;
  TopKParams params_;
  LaneSchedule schedule_;
  Rng rng_;
  std::size_t margin_ = 0;
  std::size_t block_size_ = 1;
  std::array<Lane, 4> lanes_;
  Mailbox mail_;
  TopKEstimate published_;
  std::uint64_t probes_ = 0;
  std::uint64_t forfeited_ = 0;
  std::optional<std::size_t> last_qs1_comparisons_;
};

struct DriveStats {
  std::uint64_t steps = 0;
  std::uint64_t probes = 0;
  std::uint64_t forfeited = 0;
  std::uint64_t budget_violations = 0;     // steps with more than one probe
  std::uint64_t integrity_violations = 0;  // permutation inconsistencies
};

using StepObserver = std::function<void(const StepOutcome&, const InterleavedAlgorithm&, const EvolvingOrder&)>;

/// Advances the world and the algorithm together for `steps` time steps:
/// evolution first, then the single scheduled probe. Checks the probe budget
/// and the permutation's consistency on every step.
DriveStats drive(EvolvingOrder& world, InterleavedAlgorithm& algo, std::uint64_t steps,
                 const StepObserver& observer = {});

}  // namespace evosort
