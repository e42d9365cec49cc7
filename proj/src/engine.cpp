#include "doda/engine.hpp"

#include <algorithm>

namespace doda {

ExecutionState::ExecutionState(NodeCount n) : owns_(n, 1), owners_(n) {
  if (n < kMinNodes)
    throw ContractViolation("execution needs at least 3 nodes");
}

std::vector<NodeId> ExecutionState::owners() const {
  std::vector<NodeId> out;
  for (NodeId u = 0; u < owns_.size(); ++u)
    if (owns_[u])
      out.push_back(u);
  return out;
}

std::optional<TransmissionEvent>
ExecutionState::apply(const Interaction &interaction, Decision decision) {
  if (interaction.b() >= owns_.size())
    throw ContractViolation("interaction references a node outside [0, n)");
  const Time now = clock_++;
  auto r = decision.receiver();
  if (!r)
    return std::nullopt;
  if (!interaction.involves(*r))
    throw ContractViolation("receiver " + std::to_string(*r) +
                            " is not part of interaction {" +
                            std::to_string(interaction.a()) + "," +
                            std::to_string(interaction.b()) + "}");
  const NodeId sender = interaction.other(*r);
  if (is_sink(sender))
    throw ContractViolation("the sink never transmits its data");
  if (!owns_[sender] || !owns_[*r])
    return std::nullopt;
  owns_[sender] = 0;
  --owners_;
  return TransmissionEvent{now, sender, *r};
}

ExecutionState apply_decision(ExecutionState state,
                              const Interaction &interaction,
                              Decision decision) {
  state.apply(interaction, decision);
  return state;
}

Time duration(const ExecutionTrace &trace) { return trace.duration; }

namespace {

template <class NextInteraction>
ExecutionTrace run(const AlgorithmSpec &algorithm, NodeCount n,
                   const KnowledgeBundle &knowledge, Time horizon,
                   std::uint64_t seed, NextInteraction &&next) {
  if (!algorithm.instantiate)
    throw ConfigurationError("algorithm '" + algorithm.name +
                             "' has no decision rule");
  auto rule = algorithm.instantiate(knowledge, n);
  std::vector<NodeMemory> memory(n, NodeMemory(!algorithm.oblivious));
  Rng rng(seed);
  ExecutionState state(n);
  ExecutionTrace trace;

  while (state.clock() < horizon && !state.aggregated()) {
    std::optional<Interaction> interaction = next(state, trace);
    if (!interaction)
      break;
    const NodeId u1 = interaction->a();
    const NodeId u2 = interaction->b();
    InteractionContext ctx{u1,
                           u2,
                           state.clock(),
                           state.owns_data(u1),
                           state.owns_data(u2),
                           memory[u1],
                           memory[u2],
                           knowledge,
                           rng};
    Decision decision = rule->decide(ctx);
    if (auto event = state.apply(*interaction, decision))
      trace.events.push_back(*event);
  }

  trace.processed = state.clock();
  trace.terminated = state.aggregated();
  trace.duration = trace.terminated ? trace.events.back().time : kNever;
  return trace;
}

} // namespace

ExecutionTrace simulate(const AlgorithmSpec &algorithm,
                        const InteractionSequence &sequence, Time horizon,
                        std::uint64_t seed) {
  const Time limit = std::clamp<Time>(horizon, 0, sequence.length());
  const InteractionSequence *visible = &sequence;
  std::optional<InteractionSequence> truncated;
  if (limit < sequence.length() &&
      !algorithm.requirements.empty()) {
    truncated = sequence.prefix(static_cast<std::size_t>(limit));
    visible = &*truncated;
  }
  auto knowledge =
      KnowledgeBundle::from_sequence(*visible, algorithm.requirements);
  return run(algorithm, sequence.node_count(), knowledge, limit, seed,
             [&](const ExecutionState &state,
                 const ExecutionTrace &) -> std::optional<Interaction> {
               return sequence[state.clock()];
             });
}

ExecutionTrace simulate(const AlgorithmSpec &algorithm,
                        const InteractionSequence &sequence) {
  return simulate(algorithm, sequence, sequence.length());
}

ExecutionTrace simulate(const AlgorithmSpec &algorithm, InteractionSource &source,
                        Time horizon, std::uint64_t seed) {
  auto knowledge = KnowledgeBundle::from_source(
      source.node_count(), source.declared_underlying_graph(),
      algorithm.requirements);
  return run(algorithm, source.node_count(), knowledge, horizon, seed,
             [&](const ExecutionState &state, const ExecutionTrace &trace) {
               return source.next(state, trace);
             });
}

ExecutionState replay(const InteractionSequence &sequence,
                      const std::vector<TransmissionEvent> &events,
                      Time processed) {
  ExecutionState state(sequence.node_count());
  auto event = events.begin();
  for (Time t = 0; t < std::min(processed, sequence.length()); ++t) {
    Decision d = Decision::none();
    if (event != events.end() && event->time == t) {
      if (!sequence[t].involves(event->sender) ||
          sequence[t].other(event->sender) != event->receiver)
        throw ContractViolation("event at " + std::to_string(t) +
                                " does not match the interaction");
      d = Decision::receiver(event->receiver);
    }
    auto applied = state.apply(sequence[t], d);
    if (!d.is_none()) {
      if (!applied)
        throw ContractViolation("event at " + std::to_string(t) +
                                " would be ignored: a party lacks data");
      ++event;
    }
  }
  if (event != events.end())
    throw ContractViolation("events remain past the replayed window");
  return state;
}

} // namespace doda
