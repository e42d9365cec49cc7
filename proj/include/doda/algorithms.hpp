#pragma once

#include "doda/engine.hpp"

#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace doda {

// Decision functions of the oblivious rules. Inputs are ordered u1 < u2.

/// Transmit only to the sink.
Decision waiting_decide(NodeId u1, NodeId u2);

/// Transmit to the sink if present, otherwise u2 sends to u1.
Decision gathering_decide(NodeId u1, NodeId u2);

/// The node with the later sink meeting transmits, provided that meeting is
/// after tau. m1, m2 are meetTime(u1, t), meetTime(u2, t); kNever compares
/// above every finite time, and a kNever/kNever tie takes the first branch.
Decision waiting_greedy_decide(Time tau, NodeId u1, NodeId u2, Time m1, Time m2);

AlgorithmSpec waiting();
AlgorithmSpec gathering();
AlgorithmSpec waiting_greedy(Time tau);

/// Aggregation up a tree rooted at the sink: a node forwards to its parent at
/// the first meeting after all its children have delivered. Requires the
/// underlying graph to be a tree.
AlgorithmSpec tree_aggregation();

/// Same rule on the BFS spanning tree of the underlying graph (from the sink,
/// neighbours in ascending id order). Requires a connected underlying graph.
AlgorithmSpec spanning_tree();

/// Nodes gossip their labelled futures at every interaction. Once a node
/// knows all n futures it knows the whole sequence, replays everyone's gossip
/// to get the common time T* at which the last node became informed, and
/// follows offline_schedule(sequence, T* + 1).
AlgorithmSpec full_future();

/// Replays offline_schedule(sequence, 0).
AlgorithmSpec offline();

/// Never transmits. Reference rule for no-transmission estimates.
AlgorithmSpec never_transmit();

/// Oblivious randomized rule: on each sink interaction with data, transmit
/// with probability p.
AlgorithmSpec sink_coin(double p);

/// Parent of every node in the BFS tree of `graph` rooted at the sink,
/// exploring neighbours in ascending id order. parent[sink] = sink. Throws
/// ConfigurationError if the graph is disconnected.
std::vector<NodeId> bfs_parents(const EdgeSet &graph, NodeCount n);

/// Time at which each node first knows the futures of all n nodes when every
/// interaction merges both parties' knowledge; kNever if it never does.
std::vector<Time> gossip_ready_times(const InteractionSequence &sequence);

/// Rebuilds the sequence from the union of per-node futures.
InteractionSequence merge_futures(NodeCount n,
                                  const std::vector<std::vector<TimedInteraction>> &futures,
                                  InteractionSequence::Extent extent);

struct AlgorithmOptions {
  std::optional<Time> tau;
};

/// Registry keyed by CLI names: waiting, gathering, waiting-greedy (needs
/// tau), tree, spanning-tree, full-future, offline.
AlgorithmSpec make_algorithm(std::string_view name,
                             const AlgorithmOptions &options = {});

const std::vector<std::string> &algorithm_names();

} // namespace doda
