#pragma once

#include "doda/engine.hpp"

#include <cstdint>
#include <optional>
#include <vector>

namespace doda {

/// Randomized adversary: every index is an independent uniform draw over the
/// n(n-1)/2 pairs. Deterministic given the seed.
class RandomStream final : public InteractionSource {
public:
  RandomStream(NodeCount n, std::uint64_t seed);

  NodeCount node_count() const override { return n_; }
  std::uint64_t seed() const { return seed_; }

  Interaction draw();

  std::optional<Interaction> next(const ExecutionState &,
                                  const ExecutionTrace &) override {
    return draw();
  }

  /// The first `length` draws of a fresh stream with the same seed.
  InteractionSequence prefix(std::size_t length) const;

private:
  NodeCount n_;
  std::uint64_t seed_;
  Rng rng_;
  std::vector<Interaction> pairs_;
};

RandomStream randomized_stream(NodeCount n, std::uint64_t seed);

/// Adversary choosing each interaction from the history of interactions and
/// transmissions so far. Keeps the realized sequence.
class AdaptiveAdversary : public InteractionSource {
public:
  std::optional<Interaction> next(const ExecutionState &state,
                                  const ExecutionTrace &trace) final;

  /// Everything emitted so far, marked as a prefix of an unbounded sequence.
  InteractionSequence realized() const;

protected:
  virtual Interaction choose(Time t, const TransmissionEvent *previous) = 0;

  /// Interactions emitted so far.
  const std::vector<Interaction> &history() const { return history_; }

private:
  std::vector<Interaction> history_;
};

/// Three nodes: sink 0, a = 1, b = 2. Probes with {a,b}, then {b,s}, and
/// locks into a two-interaction loop that strands the remaining data as soon
/// as the algorithm commits to a transmission.
class TriangleAdversary final : public AdaptiveAdversary {
public:
  static constexpr NodeId a = 1;
  static constexpr NodeId b = 2;

  NodeCount node_count() const override { return 3; }

protected:
  Interaction choose(Time t, const TransmissionEvent *previous) override;

private:
  std::vector<Interaction> loop_;
  std::size_t loop_position_ = 0;
};

/// Four nodes on the cycle 0-1-2-3-0. Repeats
/// ({1,0}, {3,0}, {2,1}, {2,3}) until node 2 transmits, then repeats a
/// three-interaction loop in which the new holder of 2's data never meets a
/// data-owning neighbour. The underlying graph is always the 4-cycle.
class FourCycleAdversary final : public AdaptiveAdversary {
public:
  NodeCount node_count() const override { return 4; }
  std::optional<EdgeSet> declared_underlying_graph() const override;

protected:
  Interaction choose(Time t, const TransmissionEvent *previous) override;

private:
  std::vector<Interaction> loop_;
  std::size_t position_ = 0;
  bool locked_ = false;
};

/// Oblivious sequence against oblivious randomized algorithms, over the sink
/// and u_0..u_{n-2} (u_i is node i + 1, indices mod n - 1): `l0` round-robin
/// sink meetings {u_i, s}, then `repetitions` copies of the path block
/// {u_i, u_{i+1}} for i in [0, n-2], except slot d-1 which is {u_{d-1}, s}.
/// Data of u_d can only reach the sink along a path through every other node.
InteractionSequence path_trap_sequence(NodeCount n, std::size_t l0,
                                       std::size_t d, std::size_t repetitions);

/// Fraction of `trials` independent runs of `algorithm` on `sequence` in
/// which no transmission happens. Trial k uses seed derive_seed(seed, k).
double estimate_no_transmit_probability(const AlgorithmSpec &algorithm,
                                        const InteractionSequence &sequence,
                                        std::size_t trials, std::uint64_t seed);

/// Smallest l in [1, l_cap] whose estimated no-transmission probability on
/// the l round-robin sink meetings is below 1/n; nullopt if none.
std::optional<std::size_t> find_l0(const AlgorithmSpec &algorithm, NodeCount n,
                                   std::size_t trials, std::uint64_t seed,
                                   std::size_t l_cap);

} // namespace doda
