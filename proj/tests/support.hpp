#pragma once

#include "doda/sequence.hpp"

#include <random>
#include <utility>
#include <vector>

namespace doda::testing {

using Pairs = std::vector<std::pair<NodeId, NodeId>>;

inline InteractionSequence make_sequence(
    NodeCount n, const Pairs &pairs,
    InteractionSequence::Extent extent = InteractionSequence::Extent::complete) {
  std::vector<Interaction> items;
  for (auto [u, v] : pairs)
    items.emplace_back(u, v);
  return InteractionSequence(n, std::move(items), extent);
}

/// [(1,2),(1,0),(2,0)]
inline InteractionSequence s3() { return make_sequence(3, {{1, 2}, {1, 0}, {2, 0}}); }

// Test-side generator, deliberately unrelated to RandomStream.
inline InteractionSequence random_sequence(NodeCount n, std::size_t length,
                                           std::uint32_t seed) {
  std::mt19937 gen(seed);
  std::uniform_int_distribution<NodeId> pick(0, n - 1);
  std::vector<Interaction> items;
  while (items.size() < length) {
    const NodeId u = pick(gen);
    const NodeId v = pick(gen);
    if (u != v)
      items.emplace_back(u, v);
  }
  return InteractionSequence(n, std::move(items));
}

/// Random labelled tree as a parent array: parent[v] < v, parent[0] = 0.
inline std::vector<NodeId> random_tree(NodeCount n, std::mt19937 &gen) {
  std::vector<NodeId> parent(n, 0);
  for (NodeId v = 1; v < n; ++v)
    parent[v] = std::uniform_int_distribution<NodeId>(0, v - 1)(gen);
  return parent;
}

// Forward exhaustive search over schedules. Returns the earliest index of the
// last transmission using interactions [t, end), or -1 if impossible. Kept
// tiny and separate from the library's memoized oracle.
inline long long exhaustive_opt(const InteractionSequence &seq, Time t) {
  const NodeCount n = seq.node_count();
  long long best = -1;
  std::vector<char> owns(n, 1);
  auto rec = [&](auto &&self, Time k, NodeCount left) -> void {
    if (left == 1)
      return;
    if (k >= seq.length() || (best >= 0 && k >= best))
      return;
    self(self, k + 1, left);
    const auto &i = seq[k];
    if (!owns[i.a()] || !owns[i.b()])
      return;
    for (NodeId s : {i.a(), i.b()}) {
      if (s == 0)
        continue;
      owns[s] = 0;
      if (left - 1 == 1) {
        if (best < 0 || k < best)
          best = k;
      } else {
        self(self, k + 1, left - 1);
      }
      owns[s] = 1;
    }
  };
  rec(rec, t, n);
  return best;
}

} // namespace doda::testing
