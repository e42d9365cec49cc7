#pragma once

#include "doda/sequence.hpp"

#include <cstdint>
#include <optional>
#include <set>
#include <string>
#include <vector>

namespace doda {

using EdgeSet = std::set<Interaction>;

/// One entry of a node's future: an interaction together with its time.
struct TimedInteraction {
  Time time;
  Interaction interaction;

  friend bool operator==(const TimedInteraction &,
                         const TimedInteraction &) = default;
};

enum class KnowledgeKind : std::uint8_t {
  meet_time = 1u << 0,
  underlying_graph = 1u << 1,
  future = 1u << 2,
  full_sequence = 1u << 3,
};

std::string to_string(KnowledgeKind kind);

/// Small bitmask of KnowledgeKind values. Empty means only u.ID / u.isSink.
class KnowledgeSet {
public:
  constexpr KnowledgeSet() = default;
  constexpr KnowledgeSet(std::initializer_list<KnowledgeKind> kinds) {
    for (auto k : kinds)
      bits_ |= static_cast<std::uint8_t>(k);
  }

  constexpr bool contains(KnowledgeKind k) const {
    return (bits_ & static_cast<std::uint8_t>(k)) != 0;
  }
  constexpr bool empty() const { return bits_ == 0; }
  constexpr bool is_subset_of(KnowledgeSet other) const {
    return (bits_ & ~other.bits_) == 0;
  }
  constexpr KnowledgeSet operator|(KnowledgeSet other) const {
    KnowledgeSet s;
    s.bits_ = bits_ | other.bits_;
    return s;
  }
  friend constexpr bool operator==(KnowledgeSet, KnowledgeSet) = default;

  std::string describe() const;

private:
  std::uint8_t bits_ = 0;
};

// Direct definitions. These scan the sequence on every call and serve as the
// reference the precomputed accessors below are checked against.

/// Smallest t' > t with I_t' = {u, sink}; kNever if none. Identity for the sink.
Time meet_time(const InteractionSequence &sequence, NodeId u, Time t);

/// Every (t, I_t) with u in I_t, in increasing t.
std::vector<TimedInteraction> future_of(const InteractionSequence &sequence,
                                        NodeId u);

/// Distinct pairs appearing at least once.
EdgeSet underlying_graph(const InteractionSequence &sequence);

/// Connected over all n nodes and exactly n - 1 edges.
bool is_tree(const EdgeSet &edges, NodeCount n);

bool is_connected(const EdgeSet &edges, NodeCount n);

/// What a decision rule may consult about the dynamic graph, restricted to the
/// kinds it declared. Asking for anything undeclared throws
/// ConfigurationError.
///
/// A bundle built from a sequence keeps a pointer to it and must not outlive
/// it. meetTime is served from per-node sorted sink-meeting times built in one
/// pass.
class KnowledgeBundle {
public:
  static KnowledgeBundle from_sequence(const InteractionSequence &sequence,
                                       KnowledgeSet requested);

  /// For unbounded or adaptive sources: only the underlying graph can be
  /// known in advance, and only when the source declares it.
  static KnowledgeBundle from_source(NodeCount n,
                                     const std::optional<EdgeSet> &graph,
                                     KnowledgeSet requested);

  NodeCount node_count() const { return n_; }
  KnowledgeSet available() const { return available_; }

  Time meet_time(NodeId u, Time t) const;
  std::vector<TimedInteraction> future_of(NodeId u) const;
  const EdgeSet &underlying_graph() const;
  const InteractionSequence &sequence() const;

private:
  KnowledgeBundle(NodeCount n, KnowledgeSet available)
      : n_(n), available_(available) {}

  void require(KnowledgeKind kind) const;

  NodeCount n_;
  KnowledgeSet available_;
  const InteractionSequence *sequence_ = nullptr;
  std::vector<std::vector<Time>> sink_meetings_;
  std::vector<std::vector<Time>> involvement_;
  EdgeSet graph_;
};

} // namespace doda
