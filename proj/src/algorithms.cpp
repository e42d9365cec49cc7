#include "doda/algorithms.hpp"

#include "doda/oracle.hpp"

#include <algorithm>
#include <bit>
#include <deque>
#include <map>
#include <set>

namespace doda {

Decision waiting_decide(NodeId u1, NodeId u2) {
  if (is_sink(u1))
    return Decision::receiver(u1);
  if (is_sink(u2))
    return Decision::receiver(u2);
  return Decision::none();
}

Decision gathering_decide(NodeId u1, NodeId u2) {
  if (is_sink(u2))
    return Decision::receiver(u2);
  return Decision::receiver(u1);
}

Decision waiting_greedy_decide(Time tau, NodeId u1, NodeId u2, Time m1,
                               Time m2) {
  if (m1 <= m2 && tau < m2)
    return Decision::receiver(u1);
  if (m1 > m2 && tau < m1)
    return Decision::receiver(u2);
  return Decision::none();
}

namespace {

template <class F> class FunctionRule final : public DecisionRule {
public:
  explicit FunctionRule(F f) : f_(std::move(f)) {}
  Decision decide(InteractionContext &ctx) override { return f_(ctx); }

private:
  F f_;
};

template <class F> std::unique_ptr<DecisionRule> make_rule(F f) {
  return std::make_unique<FunctionRule<F>>(std::move(f));
}

// Children deliver before their parent forwards; non-tree edges are idle.
class TreeRule final : public DecisionRule {
public:
  TreeRule(std::vector<NodeId> parent, NodeCount n)
      : parent_(std::move(parent)), children_(n, 0) {
    for (NodeId u = 0; u < n; ++u)
      if (!is_sink(u))
        ++children_[parent_[u]];
  }

  Decision decide(InteractionContext &ctx) override {
    if (!ctx.both_own_data())
      return Decision::none();
    NodeId child;
    NodeId parent;
    if (parent_[ctx.u1] == ctx.u2 && !is_sink(ctx.u1)) {
      child = ctx.u1;
      parent = ctx.u2;
    } else if (parent_[ctx.u2] == ctx.u1) {
      child = ctx.u2;
      parent = ctx.u1;
    } else {
      return Decision::none();
    }
    const auto *received =
        ctx.memory_of(child).find<std::set<NodeId>>("received_from");
    const std::size_t delivered = received ? received->size() : 0;
    if (delivered < children_[child])
      return Decision::none();
    ctx.memory_of(parent).slot<std::set<NodeId>>("received_from").insert(child);
    return Decision::receiver(parent);
  }

private:
  std::vector<NodeId> parent_;
  std::vector<std::size_t> children_;
};

struct ScheduledRule final : public DecisionRule {
  explicit ScheduledRule(const std::vector<TransmissionEvent> &events) {
    for (const auto &e : events)
      by_time.emplace(e.time, e);
  }

  Decision decide(InteractionContext &ctx) override {
    if (!ctx.both_own_data())
      return Decision::none();
    auto it = by_time.find(ctx.t);
    return it == by_time.end() ? Decision::none()
                               : Decision::receiver(it->second.receiver);
  }

  std::map<Time, TransmissionEvent> by_time;
};

// Per-node memory layout of the full-future rule.
struct KnownFutures {
  std::vector<std::uint8_t> known;
  NodeCount count = 0;
};

struct AggregationPlan {
  Time all_informed = kNever;
  std::map<Time, TransmissionEvent> schedule;
};

class FullFutureRule final : public DecisionRule {
public:
  explicit FullFutureRule(NodeCount n) : n_(n) {}

  Decision decide(InteractionContext &ctx) override {
    auto &k1 = known(ctx.memory1, ctx.u1);
    auto &k2 = known(ctx.memory2, ctx.u2);
    if (k1.count < n_ || k2.count < n_) {
      for (NodeId v = 0; v < n_; ++v)
        k1.known[v] = k2.known[v] = k1.known[v] | k2.known[v];
      k1.count = k2.count = static_cast<NodeCount>(
          std::count(k1.known.begin(), k1.known.end(), 1));
    }
    if (k1.count == n_ && !ctx.memory1.find<AggregationPlan>("plan"))
      ctx.memory1.slot<AggregationPlan>("plan", plan(ctx.knowledge));
    if (k2.count == n_ && !ctx.memory2.find<AggregationPlan>("plan"))
      ctx.memory2.slot<AggregationPlan>("plan", plan(ctx.knowledge));

    if (!ctx.both_own_data())
      return Decision::none();
    const auto *p = ctx.memory1.find<AggregationPlan>("plan");
    if (!p)
      p = ctx.memory2.find<AggregationPlan>("plan");
    if (!p)
      return Decision::none();
    auto it = p->schedule.find(ctx.t);
    return it == p->schedule.end() ? Decision::none()
                                   : Decision::receiver(it->second.receiver);
  }

private:
  KnownFutures &known(NodeMemory &memory, NodeId self) const {
    if (memory.find<KnownFutures>("known_futures"))
      return memory.slot<KnownFutures>("known_futures");
    KnownFutures fresh;
    fresh.known.assign(n_, 0);
    fresh.known[self] = 1;
    fresh.count = 1;
    return memory.slot<KnownFutures>("known_futures", std::move(fresh));
  }

  // Run by a node that knows every future, hence the whole sequence.
  AggregationPlan plan(const KnowledgeBundle &knowledge) const {
    std::vector<std::vector<TimedInteraction>> futures;
    futures.reserve(n_);
    for (NodeId v = 0; v < n_; ++v)
      futures.push_back(knowledge.future_of(v));
    const auto sequence =
        merge_futures(n_, futures, InteractionSequence::Extent::complete);
    const auto ready = gossip_ready_times(sequence);

    AggregationPlan p;
    p.all_informed = *std::max_element(ready.begin(), ready.end());
    if (p.all_informed == kNever)
      return p;
    if (auto events = offline_schedule(sequence, p.all_informed + 1))
      for (const auto &e : *events)
        p.schedule.emplace(e.time, e);
    return p;
  }

  NodeCount n_;
};

} // namespace

AlgorithmSpec waiting() {
  return {"waiting", {}, true, false,
          [](const KnowledgeBundle &, NodeCount) {
            return make_rule([](InteractionContext &ctx) {
              return waiting_decide(ctx.u1, ctx.u2);
            });
          }};
}

AlgorithmSpec gathering() {
  return {"gathering", {}, true, false,
          [](const KnowledgeBundle &, NodeCount) {
            return make_rule([](InteractionContext &ctx) {
              return gathering_decide(ctx.u1, ctx.u2);
            });
          }};
}

AlgorithmSpec waiting_greedy(Time tau) {
  if (tau < 0)
    throw ConfigurationError("waiting-greedy needs tau >= 0");
  return {"waiting-greedy",
          {KnowledgeKind::meet_time},
          true,
          false,
          [tau](const KnowledgeBundle &, NodeCount) {
            return make_rule([tau](InteractionContext &ctx) {
              if (!ctx.both_own_data())
                return Decision::none();
              const Time m1 = ctx.knowledge.meet_time(ctx.u1, ctx.t);
              const Time m2 = ctx.knowledge.meet_time(ctx.u2, ctx.t);
              return waiting_greedy_decide(tau, ctx.u1, ctx.u2, m1, m2);
            });
          }};
}

std::vector<NodeId> bfs_parents(const EdgeSet &graph, NodeCount n) {
  std::vector<std::vector<NodeId>> adjacent(n);
  for (const auto &e : graph) {
    if (e.b() >= n)
      throw ContractViolation("edge outside [0, n)");
    adjacent[e.a()].push_back(e.b());
    adjacent[e.b()].push_back(e.a());
  }
  for (auto &a : adjacent)
    std::sort(a.begin(), a.end());

  std::vector<NodeId> parent(n, kSink);
  std::vector<std::uint8_t> seen(n, 0);
  std::deque<NodeId> queue{kSink};
  seen[kSink] = 1;
  NodeCount reached = 1;
  while (!queue.empty()) {
    const NodeId u = queue.front();
    queue.pop_front();
    for (NodeId v : adjacent[u]) {
      if (seen[v])
        continue;
      seen[v] = 1;
      parent[v] = u;
      ++reached;
      queue.push_back(v);
    }
  }
  if (reached != n)
    throw ConfigurationError("underlying graph is disconnected");
  return parent;
}

AlgorithmSpec tree_aggregation() {
  return {"tree",
          {KnowledgeKind::underlying_graph},
          false,
          false,
          [](const KnowledgeBundle &k,
             NodeCount n) -> std::unique_ptr<DecisionRule> {
            if (!is_tree(k.underlying_graph(), n))
              throw ConfigurationError("underlying graph is not a tree");
            return std::make_unique<TreeRule>(
                bfs_parents(k.underlying_graph(), n), n);
          }};
}

AlgorithmSpec spanning_tree() {
  return {"spanning-tree",
          {KnowledgeKind::underlying_graph},
          false,
          false,
          [](const KnowledgeBundle &k,
             NodeCount n) -> std::unique_ptr<DecisionRule> {
            return std::make_unique<TreeRule>(
                bfs_parents(k.underlying_graph(), n), n);
          }};
}

std::vector<Time> gossip_ready_times(const InteractionSequence &sequence) {
  const NodeCount n = sequence.node_count();
  const std::size_t words = (n + 63) / 64;
  std::vector<std::vector<std::uint64_t>> known(
      n, std::vector<std::uint64_t>(words, 0));
  std::vector<NodeCount> count(n, 1);
  std::vector<Time> ready(n, kNever);
  for (NodeId u = 0; u < n; ++u)
    known[u][u / 64] |= std::uint64_t{1} << (u % 64);

  for (Time t = 0; t < sequence.length(); ++t) {
    const NodeId a = sequence[t].a();
    const NodeId b = sequence[t].b();
    if (count[a] == n && count[b] == n)
      continue;
    NodeCount merged = 0;
    for (std::size_t w = 0; w < words; ++w) {
      known[a][w] = known[b][w] = known[a][w] | known[b][w];
      merged += static_cast<NodeCount>(std::popcount(known[a][w]));
    }
    count[a] = count[b] = merged;
    if (merged == n) {
      if (ready[a] == kNever)
        ready[a] = t;
      if (ready[b] == kNever)
        ready[b] = t;
    }
  }
  return ready;
}

InteractionSequence
merge_futures(NodeCount n,
              const std::vector<std::vector<TimedInteraction>> &futures,
              InteractionSequence::Extent extent) {
  std::map<Time, Interaction> by_time;
  for (const auto &future : futures)
    for (const auto &entry : future)
      by_time.emplace(entry.time, entry.interaction);
  std::vector<Interaction> items;
  items.reserve(by_time.size());
  Time expected = 0;
  for (const auto &[t, interaction] : by_time) {
    if (t != expected++)
      throw ContractViolation("futures do not cover a contiguous sequence");
    items.push_back(interaction);
  }
  return InteractionSequence(n, std::move(items), extent);
}

AlgorithmSpec full_future() {
  return {"full-future",
          {KnowledgeKind::future},
          false,
          false,
          [](const KnowledgeBundle &, NodeCount n) {
            return std::make_unique<FullFutureRule>(n);
          }};
}

AlgorithmSpec offline() {
  return {"offline",
          {KnowledgeKind::full_sequence},
          true,
          false,
          [](const KnowledgeBundle &k, NodeCount) {
            auto events = offline_schedule(k.sequence(), 0);
            return std::make_unique<ScheduledRule>(
                events ? *events : std::vector<TransmissionEvent>{});
          }};
}

AlgorithmSpec never_transmit() {
  return {"never", {}, true, false, [](const KnowledgeBundle &, NodeCount) {
            return make_rule(
                [](InteractionContext &) { return Decision::none(); });
          }};
}

AlgorithmSpec sink_coin(double p) {
  if (!(p >= 0.0 && p <= 1.0))
    throw ConfigurationError("sink-coin probability must be in [0, 1]");
  return {"sink-coin", {}, true, true,
          [p](const KnowledgeBundle &, NodeCount) {
            return make_rule([p](InteractionContext &ctx) {
              if (!ctx.both_own_data() || !is_sink(ctx.u1))
                return Decision::none();
              return uniform_unit(ctx.rng) < p ? Decision::receiver(ctx.u1)
                                               : Decision::none();
            });
          }};
}

const std::vector<std::string> &algorithm_names() {
  static const std::vector<std::string> names{
      "waiting", "gathering",   "waiting-greedy", "tree",
      "spanning-tree", "full-future", "offline"};
  return names;
}

AlgorithmSpec make_algorithm(std::string_view name,
                             const AlgorithmOptions &options) {
  if (name == "waiting")
    return waiting();
  if (name == "gathering")
    return gathering();
  if (name == "waiting-greedy") {
    if (!options.tau)
      throw ConfigurationError("waiting-greedy requires --tau");
    return waiting_greedy(*options.tau);
  }
  if (name == "tree")
    return tree_aggregation();
  if (name == "spanning-tree")
    return spanning_tree();
  if (name == "full-future")
    return full_future();
  if (name == "offline")
    return offline();
  throw ConfigurationError("unknown algorithm '" + std::string(name) + "'");
}

} // namespace doda
