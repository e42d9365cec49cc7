// Acceptance run: one PASS/FAIL line per criterion, exit status 1 if any fail.
//
// Means are compared as interaction counts, duration + 1, because the closed
// forms count interactions up to and including the last transmission while
// durations are indices.

#include "doda/adversaries.hpp"
#include "doda/algorithms.hpp"
#include "doda/harness.hpp"
#include "doda/oracle.hpp"

#include "support.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <functional>
#include <numeric>
#include <string>

using namespace doda;
using doda::testing::random_sequence;
using doda::testing::s3;

namespace {

// Pinned tolerances and sizes.
constexpr int kOracleInstances = 300;
constexpr double kOracleSeconds = 10.0;
constexpr int kDualityWindows = 500;
constexpr std::size_t kMeanTrials = 10000;
constexpr double kGatheringTolerance = 0.03;
constexpr double kGatheringSeconds = 30.0;
constexpr double kWaitingTolerance = 0.03;
constexpr double kOfflineTolerance = 0.05;
constexpr std::size_t kOfflineScalingTrials = 2000;
constexpr double kOfflineStability = 0.15;
constexpr std::size_t kScalingTrials = 2000;
constexpr double kGatheringExponent = 2.00;
constexpr double kExponentTolerance = 0.10;
constexpr std::size_t kGreedyTrials = 2000;
constexpr double kGreedyTarget = 0.9;
constexpr Time kAdversaryHorizon = 100000;
constexpr std::int64_t kAdversaryMinCost = 10000;
constexpr int kTreeInstances = 100;
constexpr int kPeriodicInstances = 100;
constexpr int kFullFutureStreams = 100;
constexpr std::uint64_t kSeed = 20240601;

struct Outcome {
  bool pass;
  std::string detail;
};

std::string fmt(const char *format, auto... args) {
  char buffer[512];
  std::snprintf(buffer, sizeof buffer, format, args...);
  return buffer;
}

double seconds_since(std::chrono::steady_clock::time_point start) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - start)
      .count();
}

double harmonic(int k) {
  double h = 0.0;
  for (int i = 1; i <= k; ++i)
    h += 1.0 / i;
  return h;
}

bool within(double value, double target, double relative) {
  return std::abs(value - target) <= relative * target;
}

std::vector<TrialRecord> trials(const std::string &algo,
                                std::vector<NodeCount> sizes, std::size_t count,
                                std::optional<double> tau_c = std::nullopt) {
  ExperimentConfig config;
  config.algorithm = algo;
  config.sizes = std::move(sizes);
  config.trials = count;
  config.seed = kSeed;
  config.threads = 0;
  if (tau_c)
    config.tau.c = *tau_c;
  return run_trials(config);
}

// Mean interaction count per n, in ascending n. nullopt if any run did not
// terminate.
std::vector<std::pair<NodeCount, std::optional<double>>>
mean_counts(const std::vector<TrialRecord> &records) {
  std::vector<std::pair<NodeCount, std::optional<double>>> out;
  for (const auto &s : summarize(records)) {
    std::optional<double> mean;
    if (s.terminated == s.trials)
      mean = *s.mean + 1.0;
    out.emplace_back(s.n, mean);
  }
  return out;
}

Outcome check_oracle_equivalence() {
  const auto start = std::chrono::steady_clock::now();
  std::mt19937 gen(kSeed);
  std::size_t checks = 0;
  std::size_t mismatches = 0;
  auto check = [&](const InteractionSequence &seq) {
    for (Time t = 0; t <= seq.length(); ++t) {
      ++checks;
      if (opt(seq, t) != brute_force_opt(seq, t))
        ++mismatches;
    }
  };
  check(s3());
  for (int k = 0; k < kOracleInstances; ++k) {
    const NodeCount n = 3 + gen() % 3;
    const std::size_t length = 1 + gen() % 12;
    check(random_sequence(n, length, gen()));
  }
  const double elapsed = seconds_since(start);
  const bool s3_ok = opt(s3(), 0) == 1 && opt(s3(), 1) == 2 && opt(s3(), 2) == kNever;
  return {mismatches == 0 && s3_ok && elapsed < kOracleSeconds,
          fmt("%d instances + S3, %zu starts, %zu mismatches, %.2f s",
              kOracleInstances, checks, mismatches, elapsed)};
}

Outcome check_reversal_duality() {
  std::mt19937 gen(kSeed + 1);
  int mismatches = 0;
  int feasible = 0;
  for (int k = 0; k < kDualityWindows; ++k) {
    const NodeCount n = 3 + gen() % 6;
    const auto seq = random_sequence(n, 30, gen());
    const Time a = gen() % 30;
    const Time b = a + gen() % (30 - a);
    const auto window = seq.window(a, b);
    const bool forward = aggregation_feasible(seq, a, b);
    const bool reversed =
        broadcast_completion(window.reversed(), kSink, 0) <= b - a;
    const bool exhaustive = brute_force_opt(window, 0) != kNever;
    mismatches += (forward != reversed || forward != exhaustive) ? 1 : 0;
    feasible += forward ? 1 : 0;
  }
  return {mismatches == 0, fmt("%d windows (%d feasible), %d mismatches",
                               kDualityWindows, feasible, mismatches)};
}

Outcome check_gathering_mean() {
  const auto start = std::chrono::steady_clock::now();
  const auto means = mean_counts(trials("gathering", {10, 32}, kMeanTrials));
  const double elapsed = seconds_since(start);
  bool ok = elapsed < kGatheringSeconds;
  std::string detail;
  for (const auto &[n, mean] : means) {
    const double target = double(n - 1) * double(n - 1);
    ok = ok && mean && within(*mean, target, kGatheringTolerance);
    detail += fmt("n=%u count %.2f (index %.2f) vs %.0f; ", n, mean.value_or(-1),
                  mean.value_or(0) - 1, target);
  }
  return {ok, detail + fmt("%.1f s", elapsed)};
}

Outcome check_waiting_mean() {
  const auto means = mean_counts(trials("waiting", {10}, kMeanTrials));
  const double target = 45.0 * harmonic(9);
  const auto mean = means.front().second;
  return {mean && within(*mean, target, kWaitingTolerance),
          fmt("n=10 count %.2f (index %.2f) vs %.2f", mean.value_or(-1),
              mean.value_or(0) - 1, target)};
}

Outcome check_offline_mean() {
  const auto small = mean_counts(trials("offline", {10}, kMeanTrials));
  const double target = 9.0 * harmonic(9);
  const auto mean = small.front().second;
  bool ok = mean && within(*mean, target, kOfflineTolerance);
  std::string detail = fmt("n=10 count %.2f (index %.2f) vs %.2f; ",
                           mean.value_or(-1), mean.value_or(0) - 1, target);

  std::vector<double> ratios;
  for (const auto &[n, m] : mean_counts(trials("offline", {16, 32, 64},
                                               kOfflineScalingTrials))) {
    ok = ok && m.has_value();
    ratios.push_back(m.value_or(0) / (n * std::log(double(n))));
    detail += fmt("n=%u mean/(n ln n) %.4f; ", n, ratios.back());
  }
  const double centre =
      std::accumulate(ratios.begin(), ratios.end(), 0.0) / double(ratios.size());
  for (double r : ratios)
    ok = ok && within(r, centre, kOfflineStability);
  return {ok, detail + fmt("centre %.4f", centre)};
}

struct ScalingData {
  std::vector<std::pair<NodeCount, std::optional<double>>> gathering;
  std::vector<std::pair<NodeCount, std::optional<double>>> waiting;
};

const ScalingData &scaling_data() {
  static const ScalingData data = [] {
    const std::vector<NodeCount> sizes{8, 16, 32, 64, 128};
    return ScalingData{mean_counts(trials("gathering", sizes, kScalingTrials)),
                       mean_counts(trials("waiting", sizes, kScalingTrials))};
  }();
  return data;
}

Outcome check_scaling_exponents() {
  const auto &data = scaling_data();
  std::vector<FitPoint> g, w;
  bool ok = true;
  for (std::size_t k = 0; k < data.gathering.size(); ++k) {
    const auto &[n, gm] = data.gathering[k];
    const auto &wm = data.waiting[k].second;
    ok = ok && gm && wm;
    g.push_back({double(n), gm.value_or(1)});
    w.push_back({double(n), wm.value_or(1)});
  }
  const auto gf = fit_power_law(g);
  const auto wf = fit_power_law(w);
  ok = ok && std::abs(gf.exponent - kGatheringExponent) <= kExponentTolerance;
  ok = ok && wf.exponent >= gf.exponent;
  std::string ratios;
  for (std::size_t k = 0; k < g.size(); ++k) {
    const double r = w[k].value / g[k].value;
    if (k > 0)
      ok = ok && r > w[k - 1].value / g[k - 1].value;
    ratios += fmt("%.3f ", r);
  }
  return {ok, fmt("gathering exponent %.4f, waiting exponent %.4f, W/G ratios ",
                  gf.exponent, wf.exponent) +
                  ratios};
}

Outcome check_waiting_greedy() {
  const std::vector<double> candidates{1.0, 2.0, 4.0};
  std::optional<double> c;
  std::string detail;
  for (NodeCount n : {64u, 128u}) {
    const auto cal = calibrate_tau(n, kGreedyTarget, candidates, kGreedyTrials,
                                   kSeed, 0);
    detail += fmt("n=%u scan", n);
    for (const auto &[cc, f] : cal.scanned)
      detail += fmt(" c=%.0f:%.4f", cc, f);
    detail += "; ";
    if (!cal.c)
      return {false, detail + "no c reaches the target"};
    c = std::max(c.value_or(0.0), *cal.c);
  }
  bool ok = true;
  for (NodeCount n : {64u, 128u}) {
    const double f = termination_by_tau_fraction(trials("waiting-greedy", {n},
                                                        kGreedyTrials, c));
    ok = ok && f >= kGreedyTarget;
    detail += fmt("c=%.0f n=%u fraction %.4f; ", *c, n, f);
  }
  const auto wg = mean_counts(trials("waiting-greedy", {128}, kGreedyTrials, c));
  const auto off = mean_counts(trials("offline", {128}, kGreedyTrials));
  const auto &data = scaling_data();
  const auto g = data.gathering.back().second;
  const auto w = data.waiting.back().second;
  const auto m = wg.front().second;
  ok = ok && m && g && *m < *g;
  const bool ordered = off.front().second && m && g && w &&
                       *off.front().second < *m && *m < *g && *g < *w;
  ok = ok && ordered;
  return {ok, detail + fmt("n=128 means offline %.1f < WG %.1f < G %.1f < W %.1f",
                           off.front().second.value_or(-1), m.value_or(-1),
                           g.value_or(-1), w.value_or(-1))};
}

struct AdversaryRun {
  bool terminated;
  CostReport report;
};

template <class Adversary>
AdversaryRun against(const AlgorithmSpec &spec, Time horizon) {
  Adversary adversary;
  const auto trace = simulate(spec, adversary, horizon);
  return {trace.terminated, cost_of_duration(trace.duration, adversary.realized())};
}

Outcome check_impossibility() {
  bool ok = true;
  std::string detail;
  auto judge = [&](const char *name, auto run_at) {
    const AdversaryRun big = run_at(kAdversaryHorizon);
    const AdversaryRun mid = run_at(kAdversaryHorizon / 5);
    const auto &ladder = big.report.ladder;
    bool finite = ladder.size() >= 2 && ladder.back() == kNever;
    for (std::size_t k = 0; k + 1 < ladder.size(); ++k)
      finite = finite && ladder[k] != kNever;
    const Time last = ladder.size() >= 2 ? ladder[ladder.size() - 2] : -1;
    const bool pass = !big.terminated && !mid.terminated && finite &&
                      last >= kAdversaryHorizon - 10 &&
                      big.report.cost >= kAdversaryMinCost &&
                      big.report.cost > mid.report.cost;
    ok = ok && pass;
    detail += fmt("%s: cost %lld at %lld, %lld at %lld, last rung %lld; ", name,
                  (long long)big.report.cost, (long long)kAdversaryHorizon,
                  (long long)mid.report.cost, (long long)(kAdversaryHorizon / 5),
                  (long long)last);
  };
  judge("triangle/gathering",
        [](Time h) { return against<TriangleAdversary>(gathering(), h); });
  judge("triangle/waiting",
        [](Time h) { return against<TriangleAdversary>(waiting(), h); });
  judge("four-cycle/gathering",
        [](Time h) { return against<FourCycleAdversary>(gathering(), h); });

  TriangleAdversary adversary;
  simulate(gathering(), adversary, 2000);
  const auto prefix = adversary.realized();
  for (std::int64_t i = 1; i < 900; ++i)
    ok = ok && successive_convergecasts(prefix, i) <= 2 * i + 3;
  return {ok, detail + "triangle T(i) <= 2i+3 checked to i=899"};
}

Outcome check_tree_optimality() {
  std::mt19937 gen(kSeed + 9);
  int mismatches = 0;
  for (int k = 0; k < kTreeInstances; ++k) {
    const NodeCount n = 3 + gen() % 6;
    const auto parent = doda::testing::random_tree(n, gen);
    std::vector<Interaction> items;
    const std::size_t random_part = 20 + gen() % 30;
    for (std::size_t j = 0; j < random_part; ++j) {
      const NodeId v = 1 + gen() % (n - 1);
      items.emplace_back(v, parent[v]);
    }
    // Deepest-first pass over every edge: one full convergecast.
    std::vector<NodeId> order(n - 1);
    std::iota(order.begin(), order.end(), 1);
    auto depth = [&](NodeId v) {
      int d = 0;
      for (; v != kSink; v = parent[v])
        ++d;
      return d;
    };
    std::stable_sort(order.begin(), order.end(),
                     [&](NodeId x, NodeId y) { return depth(x) > depth(y); });
    for (NodeId v : order)
      items.emplace_back(v, parent[v]);
    const InteractionSequence seq(n, items);
    const Time best = opt(seq, 0);
    const auto trace = simulate(tree_aggregation(), seq);
    if (best == kNever || duration(trace) != best)
      ++mismatches;
  }
  return {mismatches == 0, fmt("%d tree-restricted sequences, n in [3,8], "
                               "length <= 56, %d mismatches",
                               kTreeInstances, mismatches)};
}

Outcome check_spanning_tree_liveness() {
  std::mt19937 gen(kSeed + 10);
  int failures = 0;
  std::size_t longest = 0;
  for (int k = 0; k < kPeriodicInstances; ++k) {
    const NodeCount n = 3 + gen() % 10;
    const auto parent = doda::testing::random_tree(n, gen);
    EdgeSet edges;
    for (NodeId v = 1; v < n; ++v)
      edges.emplace(v, parent[v]);
    const std::size_t extra = gen() % (n + 1);
    for (std::size_t j = 0; j < extra; ++j) {
      const NodeId u = gen() % n;
      const NodeId v = gen() % n;
      if (u != v)
        edges.emplace(u, v);
    }
    std::vector<Interaction> period(edges.begin(), edges.end());
    std::shuffle(period.begin(), period.end(), gen);
    std::vector<Interaction> items;
    for (NodeCount r = 0; r < n; ++r)
      items.insert(items.end(), period.begin(), period.end());
    const InteractionSequence seq(n, items);
    const Time bound = Time(n) * Time(period.size());
    const auto trace = simulate(spanning_tree(), seq, bound);
    longest = std::max(longest, period.size());
    if (!trace.terminated || trace.duration >= bound)
      ++failures;
  }
  return {failures == 0, fmt("%d periodic sequences, n in [3,12], periods up to "
                             "%zu, %d failures",
                             kPeriodicInstances, longest, failures)};
}

Outcome check_full_future_cost() {
  int failures = 0;
  std::int64_t worst = 0;
  for (int k = 0; k < kFullFutureStreams; ++k) {
    const NodeCount n = k % 2 ? 10 : 5;
    const Time length = 20 * Time(n) * Time(n);
    const auto prefix =
        RandomStream(n, derive_seed(kSeed, n, k)).prefix(std::size_t(length));
    const auto report = cost(full_future(), prefix, length);
    worst = std::max(worst, report.cost);
    if (report.verdict != Verdict::determined || report.cost > std::int64_t(n))
      ++failures;
  }
  const auto on_s3 = cost(full_future(), s3(), 3);
  const bool s3_ok = on_s3.verdict == Verdict::determined && on_s3.cost <= 3;
  return {failures == 0 && s3_ok,
          fmt("%d streams n in {5,10}: %d over n, worst cost %lld; S3 cost %lld",
              kFullFutureStreams, failures, (long long)worst,
              (long long)on_s3.cost)};
}

Outcome check_determinism() {
  ExperimentConfig config;
  config.algorithm = "waiting-greedy";
  config.sizes = {8, 16};
  config.trials = 200;
  config.seed = kSeed;
  config.with_cost = true;
  auto emit = [&](unsigned threads) {
    config.threads = threads;
    const auto records = run_trials(config);
    const auto stats = summarize(records);
    return records_to_csv(records) + records_to_json(records) +
           stats_to_csv(stats) + stats_to_json(stats);
  };
  const auto first = emit(1);
  const bool same = first == emit(1) && first == emit(4) && first == emit(3);

  const auto dir = std::filesystem::temp_directory_path() / "doda_acceptance";
  std::filesystem::create_directories(dir);
  int round_trip_failures = 0;
  std::mt19937 gen(kSeed + 12);
  for (int k = 0; k < 50; ++k) {
    const auto seq = random_sequence(3 + gen() % 20, gen() % 200, gen());
    const auto path = dir / ("seq" + std::to_string(k) + ".txt");
    write_sequence_file(path, seq);
    const auto text = format_sequence(seq);
    if (read_sequence_file(path) != seq || format_sequence(parse_sequence(text)) != text)
      ++round_trip_failures;
  }
  std::filesystem::remove_all(dir);
  return {same && round_trip_failures == 0,
          fmt("outputs identical across runs and 1/3/4 threads: %s; "
              "50 sequence files, %d round-trip failures",
              same ? "yes" : "no", round_trip_failures)};
}

} // namespace

int main() {
  const std::vector<std::pair<const char *, std::function<Outcome()>>> criteria{
      {"oracle equivalence", check_oracle_equivalence},
      {"reversal duality", check_reversal_duality},
      {"gathering mean", check_gathering_mean},
      {"waiting mean", check_waiting_mean},
      {"offline optimal mean", check_offline_mean},
      {"scaling exponents", check_scaling_exponents},
      {"waiting greedy", check_waiting_greedy},
      {"impossibility constructions", check_impossibility},
      {"tree optimality", check_tree_optimality},
      {"spanning-tree liveness", check_spanning_tree_liveness},
      {"full-future cost bound", check_full_future_cost},
      {"determinism and I/O", check_determinism},
  };
  int failed = 0;
  for (std::size_t k = 0; k < criteria.size(); ++k) {
    const auto start = std::chrono::steady_clock::now();
    Outcome outcome;
    try {
      outcome = criteria[k].second();
    } catch (const std::exception &e) {
      outcome = {false, std::string("exception: ") + e.what()};
    }
    failed += outcome.pass ? 0 : 1;
    std::printf("%s %2zu %s: %s [%.1f s]\n", outcome.pass ? "PASS" : "FAIL", k + 1,
                criteria[k].first, outcome.detail.c_str(),
                seconds_since(start));
    std::fflush(stdout);
  }
  std::printf("%d of %zu criteria passed\n", int(criteria.size()) - failed,
              criteria.size());
  return failed == 0 ? 0 : 1;
}
