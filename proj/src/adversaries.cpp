#include "doda/adversaries.hpp"

namespace doda {

RandomStream::RandomStream(NodeCount n, std::uint64_t seed)
    : n_(n), seed_(seed), rng_(seed) {
  if (n < kMinNodes)
    throw ConfigurationError("random stream needs n >= 3");
  pairs_.reserve(static_cast<std::size_t>(n) * (n - 1) / 2);
  for (NodeId u = 0; u < n; ++u)
    for (NodeId v = u + 1; v < n; ++v)
      pairs_.emplace_back(u, v);
}

Interaction RandomStream::draw() {
  return pairs_[uniform_below(rng_, pairs_.size())];
}

InteractionSequence RandomStream::prefix(std::size_t length) const {
  RandomStream fresh(n_, seed_);
  std::vector<Interaction> items;
  items.reserve(length);
  for (std::size_t i = 0; i < length; ++i)
    items.push_back(fresh.draw());
  return InteractionSequence(n_, std::move(items),
                             InteractionSequence::Extent::prefix);
}

RandomStream randomized_stream(NodeCount n, std::uint64_t seed) {
  return RandomStream(n, seed);
}

std::optional<Interaction> AdaptiveAdversary::next(const ExecutionState &state,
                                                   const ExecutionTrace &trace) {
  const Time t = state.clock();
  const TransmissionEvent *previous = nullptr;
  if (!trace.events.empty() && trace.events.back().time == t - 1)
    previous = &trace.events.back();
  history_.push_back(choose(t, previous));
  return history_.back();
}

InteractionSequence AdaptiveAdversary::realized() const {
  return InteractionSequence(node_count(), history_,
                             InteractionSequence::Extent::prefix);
}

Interaction TriangleAdversary::choose(Time, const TransmissionEvent *previous) {
  const Interaction pair{a, b};
  const Interaction b_sink{b, kSink};
  if (loop_.empty() && !history().empty()) {
    const Interaction &last = history().back();
    if (last == pair && previous) {
      // The sender of the pair probe lost its data; its partner can only
      // meet it or the sink through it.
      const NodeId sender = previous->sender;
      loop_ = {Interaction{sender, kSink}, pair};
    } else if (last == b_sink && previous) {
      loop_ = {pair, b_sink};
    } else {
      return last == pair ? b_sink : pair;
    }
  }
  if (loop_.empty())
    return pair;
  return loop_[loop_position_++ % loop_.size()];
}

std::optional<EdgeSet> FourCycleAdversary::declared_underlying_graph() const {
  return EdgeSet{{0, 1}, {1, 2}, {2, 3}, {0, 3}};
}

Interaction FourCycleAdversary::choose(Time, const TransmissionEvent *previous) {
  static const std::vector<Interaction> pattern{{1, 0}, {3, 0}, {2, 1}, {2, 3}};
  if (!locked_ && previous && previous->sender == 2) {
    const Interaction &last = history().back();
    if (last == Interaction{2, 1} && previous->receiver == 1) {
      loop_ = {{1, 2}, {2, 3}, {3, 0}};
      locked_ = true;
      position_ = 0;
    } else if (last == Interaction{2, 3} && previous->receiver == 3) {
      loop_ = {{3, 2}, {2, 1}, {1, 0}};
      locked_ = true;
      position_ = 0;
    }
  }
  const auto &cycle = locked_ ? loop_ : pattern;
  return cycle[position_++ % cycle.size()];
}

InteractionSequence path_trap_sequence(NodeCount n, std::size_t l0,
                                       std::size_t d, std::size_t repetitions) {
  if (n < kMinNodes)
    throw ConfigurationError("path trap needs n >= 3");
  const std::size_t m = n - 1;
  if (d > m - 1)
    throw ConfigurationError("d must lie in [0, n-2]");
  auto u = [m](std::size_t i) { return static_cast<NodeId>(i % m + 1); };

  std::vector<Interaction> items;
  items.reserve(l0 + repetitions * m);
  for (std::size_t i = 0; i < l0; ++i)
    items.emplace_back(u(i), kSink);
  const std::size_t sink_slot = (d + m - 1) % m;
  for (std::size_t r = 0; r < repetitions; ++r)
    for (std::size_t i = 0; i < m; ++i)
      items.emplace_back(u(i), i == sink_slot ? kSink : u(i + 1));
  return InteractionSequence(n, std::move(items));
}

double estimate_no_transmit_probability(const AlgorithmSpec &algorithm,
                                        const InteractionSequence &sequence,
                                        std::size_t trials, std::uint64_t seed) {
  if (trials == 0)
    throw ConfigurationError("need at least one trial");
  std::size_t silent = 0;
  for (std::size_t k = 0; k < trials; ++k) {
    const auto trace = simulate(algorithm, sequence, sequence.length(),
                                derive_seed(seed, k));
    if (trace.events.empty())
      ++silent;
  }
  return static_cast<double>(silent) / static_cast<double>(trials);
}

std::optional<std::size_t> find_l0(const AlgorithmSpec &algorithm, NodeCount n,
                                   std::size_t trials, std::uint64_t seed,
                                   std::size_t l_cap) {
  const double threshold = 1.0 / static_cast<double>(n);
  for (std::size_t l = 1; l <= l_cap; ++l) {
    const auto prefix = path_trap_sequence(n, l, 0, 0);
    if (estimate_no_transmit_probability(algorithm, prefix, trials, seed) <
        threshold)
      return l;
  }
  return std::nullopt;
}

} // namespace doda
