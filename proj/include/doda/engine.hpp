#pragma once

#include "doda/knowledge.hpp"
#include "doda/random.hpp"
#include "doda/sequence.hpp"

#include <any>
#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace doda {

/// Output of a decision rule: the receiver of the other node's data, or
/// nothing (the paper's bottom).
class Decision {
public:
  static Decision none() { return Decision(); }
  static Decision receiver(NodeId r) { return Decision(r); }

  bool is_none() const { return !receiver_; }
  std::optional<NodeId> receiver() const { return receiver_; }

  friend bool operator==(const Decision &, const Decision &) = default;

private:
  Decision() = default;
  explicit Decision(NodeId r) : receiver_(r) {}

  std::optional<NodeId> receiver_;
};

struct TransmissionEvent {
  Time time;
  NodeId sender;
  NodeId receiver;

  friend bool operator==(const TransmissionEvent &,
                         const TransmissionEvent &) = default;
};

/// Which nodes still own data, and the index of the next interaction.
/// Every node starts with data; a node that transmits leaves the computation.
class ExecutionState {
public:
  explicit ExecutionState(NodeCount n);

  NodeCount node_count() const { return static_cast<NodeCount>(owns_.size()); }
  bool owns_data(NodeId u) const { return owns_.at(u) != 0; }
  bool transmitted(NodeId u) const { return !owns_data(u); }
  NodeCount owner_count() const { return owners_; }
  Time clock() const { return clock_; }

  /// Only the sink still owns data.
  bool aggregated() const { return owners_ == 1; }

  std::vector<NodeId> owners() const;

  /// Applies one interaction in place and advances the clock. A receiver
  /// outside the interaction, or one that would make the sink transmit, is a
  /// ContractViolation. The decision is ignored unless both nodes own data.
  std::optional<TransmissionEvent> apply(const Interaction &interaction,
                                         Decision decision);

  friend bool operator==(const ExecutionState &,
                         const ExecutionState &) = default;

private:
  std::vector<std::uint8_t> owns_;
  NodeCount owners_;
  Time clock_ = 0;
};

/// Value-semantics form of ExecutionState::apply.
ExecutionState apply_decision(ExecutionState state,
                              const Interaction &interaction,
                              Decision decision);

struct ExecutionTrace {
  std::vector<TransmissionEvent> events;
  bool terminated = false;
  /// Index of the final transmission, kNever when not terminated.
  Time duration = kNever;
  /// Number of interactions the engine consumed.
  Time processed = 0;
};

Time duration(const ExecutionTrace &trace);

/// Per-node key/value store handed to decision rules. Stores given to
/// oblivious algorithms reject writes.
class NodeMemory {
public:
  explicit NodeMemory(bool writable = true) : writable_(writable) {}

  bool writable() const { return writable_; }
  bool empty() const { return slots_.empty(); }

  template <class T> const T *find(std::string_view key) const {
    auto it = slots_.find(key);
    return it == slots_.end() ? nullptr : std::any_cast<T>(&it->second);
  }

  /// Existing value under `key`, or a newly stored `init`.
  template <class T> T &slot(std::string_view key, T init = T{}) {
    if (!writable_)
      throw ContractViolation("oblivious node memory is read-only (key '" +
                              std::string(key) + "')");
    auto it = slots_.find(key);
    if (it == slots_.end())
      it = slots_.emplace(std::string(key), std::move(init)).first;
    return std::any_cast<T &>(it->second);
  }

private:
  bool writable_;
  std::map<std::string, std::any, std::less<>> slots_;
};

/// Everything a decision rule sees at one interaction. u1 < u2 by id. The
/// rule is consulted at every interaction so the two nodes can exchange
/// control information; its output only matters when both own data.
struct InteractionContext {
  NodeId u1;
  NodeId u2;
  Time t;
  bool u1_has_data;
  bool u2_has_data;
  NodeMemory &memory1;
  NodeMemory &memory2;
  const KnowledgeBundle &knowledge;
  Rng &rng;

  bool both_own_data() const { return u1_has_data && u2_has_data; }
  NodeMemory &memory_of(NodeId u) const { return u == u1 ? memory1 : memory2; }
};

class DecisionRule {
public:
  virtual ~DecisionRule() = default;
  virtual Decision decide(InteractionContext &ctx) = 0;
};

/// A named DODA algorithm. `instantiate` builds the per-run rule; anything
/// it precomputes must be a pure function of the knowledge it was given.
struct AlgorithmSpec {
  std::string name;
  KnowledgeSet requirements;
  bool oblivious = true;
  bool randomized = false;
  std::function<std::unique_ptr<DecisionRule>(const KnowledgeBundle &,
                                              NodeCount)>
      instantiate;
};

/// Pull interface for interaction generators. The engine asks for the
/// interaction at index state.clock() after the previous one was applied, so
/// adaptive sources can react to past decisions only.
class InteractionSource {
public:
  virtual ~InteractionSource() = default;
  virtual NodeCount node_count() const = 0;
  virtual std::optional<Interaction> next(const ExecutionState &state,
                                          const ExecutionTrace &trace) = 0;
  /// Underlying graph of everything the source can ever emit, when fixed in
  /// advance.
  virtual std::optional<EdgeSet> declared_underlying_graph() const {
    return std::nullopt;
  }
};

/// Runs `algorithm` on the first `horizon` interactions of `sequence`
/// (all of them when horizon exceeds the length). Knowledge is computed over
/// that same window.
ExecutionTrace simulate(const AlgorithmSpec &algorithm,
                        const InteractionSequence &sequence, Time horizon,
                        std::uint64_t seed = 0);

ExecutionTrace simulate(const AlgorithmSpec &algorithm,
                        const InteractionSequence &sequence);

/// Runs against a pull source for at most `horizon` interactions. Only
/// knowledge the source can serve up front (a declared underlying graph) is
/// available; other requirements raise ConfigurationError.
ExecutionTrace simulate(const AlgorithmSpec &algorithm, InteractionSource &source,
                        Time horizon, std::uint64_t seed = 0);

/// Feeds the first `processed` interactions through apply_decision, using
/// each event's receiver at its time and no-op decisions elsewhere. Throws
/// ContractViolation when an event does not match its interaction or would
/// be ignored.
ExecutionState replay(const InteractionSequence &sequence,
                      const std::vector<TransmissionEvent> &events,
                      Time processed);

} // namespace doda
