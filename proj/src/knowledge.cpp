#include "doda/knowledge.hpp"

#include <algorithm>
#include <numeric>

namespace doda {

std::string to_string(KnowledgeKind kind) {
  switch (kind) {
  case KnowledgeKind::meet_time:
    return "meetTime";
  case KnowledgeKind::underlying_graph:
    return "underlyingGraph";
  case KnowledgeKind::future:
    return "future";
  case KnowledgeKind::full_sequence:
    return "fullSequence";
  }
  return "?";
}

std::string KnowledgeSet::describe() const {
  std::string out;
  for (auto k : {KnowledgeKind::meet_time, KnowledgeKind::underlying_graph,
                 KnowledgeKind::future, KnowledgeKind::full_sequence}) {
    if (!contains(k))
      continue;
    if (!out.empty())
      out += ",";
    out += to_string(k);
  }
  return out.empty() ? "none" : out;
}

Time meet_time(const InteractionSequence &sequence, NodeId u, Time t) {
  if (is_sink(u))
    return t;
  for (Time i = std::max<Time>(t + 1, 0); i < sequence.length(); ++i)
    if (sequence[i].touches_sink() && sequence[i].involves(u))
      return i;
  return kNever;
}

std::vector<TimedInteraction> future_of(const InteractionSequence &sequence,
                                        NodeId u) {
  std::vector<TimedInteraction> out;
  for (Time i = 0; i < sequence.length(); ++i)
    if (sequence[i].involves(u))
      out.push_back({i, sequence[i]});
  return out;
}

EdgeSet underlying_graph(const InteractionSequence &sequence) {
  return EdgeSet(sequence.begin(), sequence.end());
}

bool is_connected(const EdgeSet &edges, NodeCount n) {
  std::vector<NodeId> parent(n);
  std::iota(parent.begin(), parent.end(), 0);
  auto find = [&](NodeId x) {
    while (parent[x] != x)
      x = parent[x] = parent[parent[x]];
    return x;
  };
  NodeCount components = n;
  for (const auto &e : edges) {
    if (e.b() >= n)
      throw ContractViolation("edge outside [0, n)");
    auto ra = find(e.a());
    auto rb = find(e.b());
    if (ra != rb) {
      parent[ra] = rb;
      --components;
    }
  }
  return components == 1;
}

bool is_tree(const EdgeSet &edges, NodeCount n) {
  return edges.size() + 1 == n && is_connected(edges, n);
}

KnowledgeBundle KnowledgeBundle::from_sequence(const InteractionSequence &sequence,
                                               KnowledgeSet requested) {
  KnowledgeBundle k(sequence.node_count(), requested);
  k.sequence_ = &sequence;
  const auto n = sequence.node_count();

  if (requested.contains(KnowledgeKind::meet_time)) {
    k.sink_meetings_.resize(n);
    for (Time t = 0; t < sequence.length(); ++t)
      if (sequence[t].touches_sink())
        k.sink_meetings_[sequence[t].b()].push_back(t);
  }
  if (requested.contains(KnowledgeKind::future)) {
    k.involvement_.resize(n);
    for (Time t = 0; t < sequence.length(); ++t) {
      k.involvement_[sequence[t].a()].push_back(t);
      k.involvement_[sequence[t].b()].push_back(t);
    }
  }
  if (requested.contains(KnowledgeKind::underlying_graph))
    k.graph_ = doda::underlying_graph(sequence);
  return k;
}

KnowledgeBundle KnowledgeBundle::from_source(NodeCount n,
                                             const std::optional<EdgeSet> &graph,
                                             KnowledgeSet requested) {
  KnowledgeSet servable;
  if (graph)
    servable = {KnowledgeKind::underlying_graph};
  if (!requested.is_subset_of(servable))
    throw ConfigurationError(
        "knowledge '" + requested.describe() +
        "' cannot be served by an unbounded interaction source (available: " +
        servable.describe() + ")");
  KnowledgeBundle k(n, requested);
  if (requested.contains(KnowledgeKind::underlying_graph))
    k.graph_ = *graph;
  return k;
}

void KnowledgeBundle::require(KnowledgeKind kind) const {
  if (!available_.contains(kind))
    throw ConfigurationError("knowledge '" + to_string(kind) +
                             "' was not declared by the algorithm");
}

Time KnowledgeBundle::meet_time(NodeId u, Time t) const {
  require(KnowledgeKind::meet_time);
  if (is_sink(u))
    return t;
  const auto &times = sink_meetings_.at(u);
  auto it = std::upper_bound(times.begin(), times.end(), t);
  return it == times.end() ? kNever : *it;
}

std::vector<TimedInteraction> KnowledgeBundle::future_of(NodeId u) const {
  require(KnowledgeKind::future);
  std::vector<TimedInteraction> out;
  out.reserve(involvement_.at(u).size());
  for (auto t : involvement_[u])
    out.push_back({t, (*sequence_)[t]});
  return out;
}

const EdgeSet &KnowledgeBundle::underlying_graph() const {
  require(KnowledgeKind::underlying_graph);
  return graph_;
}

const InteractionSequence &KnowledgeBundle::sequence() const {
  require(KnowledgeKind::full_sequence);
  return *sequence_;
}

} // namespace doda
