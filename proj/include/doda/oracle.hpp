#pragma once

#include "doda/engine.hpp"

#include <cstdint>
#include <optional>
#include <vector>

namespace doda {

/// Earliest index at which the informed set, started from {source} at
/// `start` and grown by every interaction joining an informed and an
/// uninformed node, covers all nodes. kNever if it never does.
Time broadcast_completion(const InteractionSequence &sequence, NodeId source,
                          Time start);

/// Whether all data can reach the sink using only interactions in
/// [first, last]. Decided by a broadcast from the sink over the window in
/// reverse time order.
bool aggregation_feasible(const InteractionSequence &sequence, Time first,
                          Time last);

/// Ending index of a convergecast started at t (kNever if none). Grows the
/// window by doubling, then binary-searches the feasibility predicate.
Time opt(const InteractionSequence &sequence, Time t);

/// Same value as opt() by scanning every window end in order.
Time opt_linear(const InteractionSequence &sequence, Time t);

/// T(i): T(1) = opt(0), T(i+1) = opt(T(i) + 1). kNever propagates.
Time successive_convergecasts(const InteractionSequence &sequence,
                             std::int64_t i);

/// Exhaustive minimum over every legal schedule in [t, end) of the last
/// transmission's index, memoized on (index, owner bitmask). Refuses
/// instances with more than 12 nodes or windows longer than 30.
Time brute_force_opt(const InteractionSequence &sequence, Time t);

inline constexpr NodeCount kBruteForceMaxNodes = 12;
inline constexpr Time kBruteForceMaxWindow = 30;

/// A schedule achieving opt(t): broadcast from the sink backwards over
/// [t, opt(t)], keep the first edge that informs each node, and send child to
/// parent forwards in time. nullopt when opt(t) is kNever.
std::optional<std::vector<TransmissionEvent>>
offline_schedule(const InteractionSequence &sequence, Time t);

enum class Verdict { determined, undetermined };

inline constexpr std::int64_t kInfiniteCost = INT64_MAX;

struct CostReport {
  Time duration = kNever;
  /// T(1), T(2), ... up to the first rung covering the duration or the first
  /// kNever.
  std::vector<Time> ladder;
  /// min{i : duration <= T(i)}, or i_max when the run does not terminate.
  /// For an undetermined verdict this is a lower bound.
  std::int64_t cost = kInfiniteCost;
  /// Undetermined when the run did not terminate on a prefix of a longer
  /// source: the algorithm might still finish later.
  Verdict verdict = Verdict::determined;
};

/// Cost of a run of known duration on `sequence`.
CostReport cost_of_duration(Time duration, const InteractionSequence &sequence);

/// Simulates `algorithm` over the first `horizon` interactions and prices the
/// run against the ladder of the same prefix.
CostReport cost(const AlgorithmSpec &algorithm,
                const InteractionSequence &sequence, Time horizon,
                std::uint64_t seed = 0);

} // namespace doda
