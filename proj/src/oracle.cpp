#include "doda/oracle.hpp"

#include <algorithm>

namespace doda {

Time broadcast_completion(const InteractionSequence &sequence, NodeId source,
                          Time start) {
  const NodeCount n = sequence.node_count();
  if (source >= n)
    throw ContractViolation("broadcast source outside [0, n)");
  std::vector<std::uint8_t> informed(n, 0);
  informed[source] = 1;
  NodeCount count = 1;
  for (Time t = std::max<Time>(start, 0); t < sequence.length(); ++t) {
    const auto &i = sequence[t];
    if (informed[i.a()] == informed[i.b()])
      continue;
    informed[i.a()] = informed[i.b()] = 1;
    if (++count == n)
      return t;
  }
  return kNever;
}

namespace {

// Reverse broadcast from the sink over [first, last]. Fills `parent` with the
// node each one transmits to and `send_time` with when, if requested.
bool reverse_broadcast(const InteractionSequence &sequence, Time first,
                       Time last, std::vector<NodeId> *parent,
                       std::vector<Time> *send_time) {
  const NodeCount n = sequence.node_count();
  std::vector<std::uint8_t> informed(n, 0);
  informed[kSink] = 1;
  NodeCount count = 1;
  for (Time t = last; t >= first && count < n; --t) {
    const auto &i = sequence[t];
    if (informed[i.a()] == informed[i.b()])
      continue;
    const NodeId fresh = informed[i.a()] ? i.b() : i.a();
    informed[fresh] = 1;
    ++count;
    if (parent) {
      (*parent)[fresh] = i.other(fresh);
      (*send_time)[fresh] = t;
    }
  }
  return count == n;
}

} // namespace

bool aggregation_feasible(const InteractionSequence &sequence, Time first,
                          Time last) {
  first = std::max<Time>(first, 0);
  last = std::min(last, sequence.length() - 1);
  if (last < first)
    return false;
  return reverse_broadcast(sequence, first, last, nullptr, nullptr);
}

Time opt(const InteractionSequence &sequence, Time t) {
  t = std::max<Time>(t, 0);
  const Time end = sequence.length() - 1;
  // n - 1 transmissions need at least n - 1 interactions.
  const Time shortest = static_cast<Time>(sequence.node_count()) - 2;
  if (t + shortest > end)
    return kNever;

  Time infeasible = t + shortest - 1;
  Time span = shortest + 1;
  Time feasible = kNever;
  for (;;) {
    const Time candidate = std::min(t + span - 1, end);
    if (aggregation_feasible(sequence, t, candidate)) {
      feasible = candidate;
      break;
    }
    infeasible = candidate;
    if (candidate == end)
      return kNever;
    span *= 2;
  }
  while (feasible - infeasible > 1) {
    const Time mid = infeasible + (feasible - infeasible) / 2;
    if (aggregation_feasible(sequence, t, mid))
      feasible = mid;
    else
      infeasible = mid;
  }
  return feasible;
}

Time opt_linear(const InteractionSequence &sequence, Time t) {
  t = std::max<Time>(t, 0);
  for (Time last = t; last < sequence.length(); ++last)
    if (aggregation_feasible(sequence, t, last))
      return last;
  return kNever;
}

Time successive_convergecasts(const InteractionSequence &sequence,
                             std::int64_t i) {
  if (i < 1)
    throw ContractViolation("convergecast count must be at least 1");
  Time rung = opt(sequence, 0);
  for (std::int64_t k = 1; k < i && rung != kNever; ++k)
    rung = opt(sequence, rung + 1);
  return rung;
}

Time brute_force_opt(const InteractionSequence &sequence, Time t) {
  const NodeCount n = sequence.node_count();
  t = std::max<Time>(t, 0);
  const Time window = std::max<Time>(sequence.length() - t, 0);
  if (n > kBruteForceMaxNodes || window > kBruteForceMaxWindow)
    throw ConfigurationError("brute-force oracle refuses n = " +
                             std::to_string(n) + ", window = " +
                             std::to_string(window));

  const std::uint32_t full = (1u << n) - 1;
  const std::uint32_t done = 1u << kSink;
  constexpr Time kUnknown = -2;
  // best[k][mask]: earliest final-transmission index reachable from owner set
  // `mask` before interaction t + k.
  std::vector<std::vector<Time>> best(
      static_cast<std::size_t>(window) + 1,
      std::vector<Time>(std::size_t{1} << n, kUnknown));

  auto solve = [&](auto &&self, Time k, std::uint32_t mask) -> Time {
    if (k == window)
      return kNever;
    Time &memo = best[k][mask];
    if (memo != kUnknown)
      return memo;
    Time result = self(self, k + 1, mask);
    const auto &i = sequence[t + k];
    const std::uint32_t ba = 1u << i.a();
    const std::uint32_t bb = 1u << i.b();
    if ((mask & ba) && (mask & bb)) {
      for (NodeId sender : {i.a(), i.b()}) {
        if (is_sink(sender))
          continue;
        const std::uint32_t next = mask & ~(1u << sender);
        const Time r = next == done ? t + k : self(self, k + 1, next);
        result = std::min(result, r);
      }
    }
    return memo = result;
  };
  return solve(solve, 0, full);
}

std::optional<std::vector<TransmissionEvent>>
offline_schedule(const InteractionSequence &sequence, Time t) {
  const Time end = opt(sequence, t);
  if (end == kNever)
    return std::nullopt;
  const NodeCount n = sequence.node_count();
  std::vector<NodeId> parent(n, kSink);
  std::vector<Time> send_time(n, kNever);
  reverse_broadcast(sequence, std::max<Time>(t, 0), end, &parent, &send_time);

  std::vector<TransmissionEvent> events;
  for (NodeId u = 0; u < n; ++u)
    if (!is_sink(u))
      events.push_back({send_time[u], u, parent[u]});
  std::sort(events.begin(), events.end(),
            [](const auto &x, const auto &y) { return x.time < y.time; });
  return events;
}

CostReport cost_of_duration(Time duration, const InteractionSequence &sequence) {
  CostReport report;
  report.duration = duration;
  Time next_start = 0;
  for (std::int64_t i = 1;; ++i) {
    const Time rung = opt(sequence, next_start);
    report.ladder.push_back(rung);
    if (duration <= rung && duration != kNever) {
      report.cost = i;
      return report;
    }
    if (rung == kNever) {
      // duration is kNever here: i is i_max.
      report.cost = i;
      if (sequence.is_prefix())
        report.verdict = Verdict::undetermined;
      return report;
    }
    next_start = rung + 1;
  }
}

CostReport cost(const AlgorithmSpec &algorithm,
                const InteractionSequence &sequence, Time horizon,
                std::uint64_t seed) {
  const auto window =
      sequence.prefix(static_cast<std::size_t>(std::max<Time>(horizon, 0)));
  const auto trace = simulate(algorithm, window, window.length(), seed);
  return cost_of_duration(trace.duration, window);
}

} // namespace doda
