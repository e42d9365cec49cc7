// Command-line front end: simulate, bench, oracle, adversary, cost, fit,
// calibrate. Exit codes: 0 success, 1 usage error, 2 undetermined at horizon.

#include "doda/adversaries.hpp"
#include "doda/algorithms.hpp"
#include "doda/harness.hpp"
#include "doda/oracle.hpp"

#include "CLI11.hpp"
#include "json.hpp"

#include <iostream>
#include <map>

namespace {

using ordered_json = nlohmann::ordered_json;
using namespace doda;

constexpr int kExitOk = 0;
constexpr int kExitUsage = 1;
constexpr int kExitUndetermined = 2;

ordered_json time_json(Time t) {
  return t == kNever ? ordered_json(nullptr) : ordered_json(t);
}

ordered_json events_json(const std::vector<TransmissionEvent> &events) {
  ordered_json array = ordered_json::array();
  for (const auto &e : events)
    array.push_back({{"t", e.time}, {"sender", e.sender}, {"receiver", e.receiver}});
  return array;
}

ordered_json cost_json(const std::string &algo, const CostReport &report) {
  ordered_json j;
  j["algo"] = algo;
  j["duration"] = time_json(report.duration);
  j["ladder"] = ordered_json::array();
  for (Time rung : report.ladder)
    j["ladder"].push_back(time_json(rung));
  j["cost"] = report.cost == kInfiniteCost ? ordered_json(nullptr)
                                           : ordered_json(report.cost);
  j["verdict"] =
      report.verdict == Verdict::determined ? "determined" : "undetermined";
  return j;
}

void print(const ordered_json &j) { std::cout << j.dump(2) << '\n'; }

AlgorithmSpec algorithm_from(const std::string &name, std::optional<Time> tau) {
  return make_algorithm(name, {tau});
}

std::vector<NodeCount> parse_sizes(const std::vector<std::string> &items) {
  std::vector<NodeCount> out;
  for (const auto &item : items)
    out.push_back(static_cast<NodeCount>(std::stoul(item)));
  return out;
}

struct SimulateArgs {
  std::string algo;
  std::optional<Time> tau;
  std::string seq;
  std::optional<Time> horizon;
  std::optional<std::uint64_t> seed;
  bool trace = false;
};

int run_simulate(const SimulateArgs &a) {
  const auto sequence = read_sequence_file(a.seq);
  const auto spec = algorithm_from(a.algo, a.tau);
  const Time horizon = a.horizon.value_or(sequence.length());
  const auto trace = simulate(spec, sequence, horizon, a.seed.value_or(0));
  std::cout << trace_to_json(trace, spec.name, sequence.node_count(), a.seed,
                             a.trace);
  if (!trace.terminated && horizon < sequence.length())
    return kExitUndetermined;
  return kExitOk;
}

struct BenchArgs {
  std::string algo;
  std::vector<std::string> sizes;
  std::size_t trials = 100;
  std::uint64_t seed = 0;
  std::optional<Time> tau;
  double tau_c = 2.0;
  std::string horizon = "auto";
  std::string out;
  std::string stats;
  std::string format = "csv";
  unsigned threads = 1;
  bool with_cost = false;
};

int run_bench(const BenchArgs &a) {
  ExperimentConfig config;
  config.algorithm = a.algo;
  config.tau.fixed = a.tau;
  config.tau.c = a.tau_c;
  config.sizes = parse_sizes(a.sizes);
  config.trials = a.trials;
  config.seed = a.seed;
  if (a.horizon != "auto")
    config.horizon.fixed = std::stoll(a.horizon);
  config.threads = a.threads;
  config.with_cost = a.with_cost;

  const auto records = run_trials(config);
  const bool json = a.format == "json";
  const auto text = json ? records_to_json(records) : records_to_csv(records);
  if (a.out.empty())
    std::cout << text;
  else
    write_text_file(a.out, text);
  if (!a.stats.empty()) {
    const auto stats = summarize(records);
    write_text_file(a.stats, json ? stats_to_json(stats) : stats_to_csv(stats));
  }
  return kExitOk;
}

struct OracleArgs {
  std::string seq;
  std::string op;
  Time t = 0;
  std::int64_t i = 1;
  std::string algo;
  std::optional<Time> tau;
  std::optional<Time> horizon;
};

int run_oracle(const OracleArgs &a) {
  const auto sequence = read_sequence_file(a.seq);
  ordered_json j;
  j["op"] = a.op;
  if (a.op == "opt") {
    j["t"] = a.t;
    j["value"] = time_json(opt(sequence, a.t));
  } else if (a.op == "T") {
    j["i"] = a.i;
    j["value"] = time_json(successive_convergecasts(sequence, a.i));
  } else if (a.op == "schedule") {
    j["t"] = a.t;
    const auto schedule = offline_schedule(sequence, a.t);
    j["feasible"] = schedule.has_value();
    j["events"] = schedule ? events_json(*schedule) : ordered_json::array();
  } else {
    if (a.algo.empty())
      throw ConfigurationError("--op cost needs --algo");
    const auto report = cost(algorithm_from(a.algo, a.tau), sequence,
                             a.horizon.value_or(sequence.length()));
    j.update(cost_json(a.algo, report));
    print(j);
    return report.verdict == Verdict::undetermined ? kExitUndetermined : kExitOk;
  }
  print(j);
  return kExitOk;
}

struct AdversaryArgs {
  std::string family;
  NodeCount n = 0;
  std::uint64_t seed = 0;
  std::optional<std::size_t> l0;
  std::size_t d = 1;
  std::size_t reps = 1;
  std::optional<Time> horizon;
  std::string out;
  std::string algo;
  std::optional<Time> tau;
  std::size_t trials = 1000;
};

int run_adversary(const AdversaryArgs &a) {
  ordered_json summary;
  summary["family"] = a.family;
  std::optional<InteractionSequence> sequence;

  if (a.family == "random") {
    if (a.n == 0 || !a.horizon)
      throw ConfigurationError("--family random needs --n and --horizon");
    sequence = RandomStream(a.n, a.seed).prefix(static_cast<std::size_t>(*a.horizon));
  } else if (a.family == "theorem2") {
    if (a.n == 0)
      throw ConfigurationError("--family theorem2 needs --n");
    std::size_t l0 = a.l0.value_or(0);
    if (!a.l0 && !a.algo.empty()) {
      const auto found =
          find_l0(algorithm_from(a.algo, a.tau), a.n, a.trials, a.seed,
                  static_cast<std::size_t>(a.horizon.value_or(1000)));
      if (!found)
        throw ConfigurationError("no l0 found below the scan cap");
      l0 = *found;
    }
    summary["l0"] = l0;
    summary["d"] = a.d;
    summary["reps"] = a.reps;
    sequence = path_trap_sequence(a.n, l0, a.d, a.reps);
  } else {
    if (a.algo.empty())
      throw ConfigurationError("adaptive families need --algo");
    const auto spec = algorithm_from(a.algo, a.tau);
    const Time horizon = a.horizon.value_or(1000);
    std::unique_ptr<AdaptiveAdversary> adversary;
    if (a.family == "theorem1")
      adversary = std::make_unique<TriangleAdversary>();
    else
      adversary = std::make_unique<FourCycleAdversary>();
    const auto trace = simulate(spec, *adversary, horizon, a.seed);
    sequence = adversary->realized();
    summary["algo"] = spec.name;
    summary["terminated"] = trace.terminated;
    summary["duration"] = time_json(trace.duration);
  }

  summary["n"] = sequence->node_count();
  summary["length"] = sequence->length();
  write_sequence_file(a.out, *sequence);
  print(summary);
  return kExitOk;
}

int run_cost(const std::string &algo, std::optional<Time> tau,
             const std::string &seq, std::optional<Time> horizon,
             std::uint64_t seed) {
  const auto sequence = read_sequence_file(seq);
  const auto report = cost(algorithm_from(algo, tau), sequence,
                           horizon.value_or(sequence.length()), seed);
  print(cost_json(algo, report));
  return report.verdict == Verdict::undetermined ? kExitUndetermined : kExitOk;
}

int run_fit(const std::string &in, const std::string &model) {
  const auto text = read_text_file(in);
  const auto first = text.find_first_not_of(" \t\r\n");
  const auto records = first != std::string::npos && text[first] == '['
                           ? records_from_json(text)
                           : records_from_csv(text);
  std::map<std::string, std::vector<TrialRecord>> by_algo;
  for (const auto &r : records)
    by_algo[r.algo].push_back(r);
  if (by_algo.empty())
    throw ConfigurationError("no records in " + in);

  const FitModel m = model == "power" ? FitModel::power : FitModel::n_log_n;
  ordered_json out = ordered_json::array();
  for (const auto &[algo, group] : by_algo) {
    std::vector<FitPoint> points;
    for (const auto &s : summarize(group))
      if (s.mean)
        points.push_back({static_cast<double>(s.n), *s.mean + 1.0});
    const auto result = fit(m, points);
    ordered_json j;
    j["algo"] = algo;
    j["model"] = model;
    j["points"] = points.size();
    j["exponent"] = result.exponent;
    j["coefficient"] = result.coefficient;
    j["residual"] = result.residual;
    out.push_back(j);
  }
  print(out);
  return kExitOk;
}

struct CalibrateArgs {
  std::string algo;
  NodeCount n = 0;
  double target = 0.9;
  std::size_t trials = 1000;
  std::uint64_t seed = 0;
  std::vector<double> c_list{1.0, 2.0, 4.0};
  unsigned threads = 1;
};

int run_calibrate(const CalibrateArgs &a) {
  if (a.algo != "waiting-greedy")
    throw ConfigurationError("calibrate only applies to waiting-greedy");
  const auto result =
      calibrate_tau(a.n, a.target, a.c_list, a.trials, a.seed, a.threads);
  ordered_json j;
  j["algo"] = a.algo;
  j["n"] = a.n;
  j["target"] = a.target;
  j["c"] = result.c ? ordered_json(*result.c) : ordered_json(nullptr);
  j["tau"] = result.c ? ordered_json(TauRule{std::nullopt, *result.c}.resolve(a.n))
                      : ordered_json(nullptr);
  j["scanned"] = ordered_json::array();
  for (const auto &[c, fraction] : result.scanned)
    j["scanned"].push_back({{"c", c}, {"fraction", fraction}});
  print(j);
  return kExitOk;
}

} // namespace

int main(int argc, char **argv) {
  CLI::App app{"Distributed online data aggregation toolkit"};
  app.require_subcommand(1);
  const auto algo_check = CLI::IsMember(doda::algorithm_names());

  SimulateArgs sim;
  auto *simulate_cmd = app.add_subcommand("simulate", "Run one algorithm on a sequence file");
  simulate_cmd->add_option("--algo", sim.algo)->required()->check(algo_check);
  simulate_cmd->add_option("--tau", sim.tau, "Waiting Greedy threshold");
  simulate_cmd->add_option("--seq", sim.seq)->required()->check(CLI::ExistingFile);
  simulate_cmd->add_option("--horizon", sim.horizon)->check(CLI::NonNegativeNumber);
  simulate_cmd->add_option("--seed", sim.seed);
  simulate_cmd->add_flag("--trace", sim.trace, "Include transmission events");

  BenchArgs bench;
  auto *bench_cmd = app.add_subcommand("bench", "Monte Carlo trials on random streams");
  bench_cmd->add_option("--algo", bench.algo)->required()->check(algo_check);
  bench_cmd->add_option("--n", bench.sizes)->required()->delimiter(',');
  bench_cmd->add_option("--trials", bench.trials)->check(CLI::PositiveNumber);
  bench_cmd->add_option("--seed", bench.seed);
  bench_cmd->add_option("--tau", bench.tau, "Fixed Waiting Greedy threshold");
  bench_cmd->add_option("--tau-c", bench.tau_c, "Constant c in c*n^1.5*sqrt(ln n)");
  bench_cmd->add_option("--horizon", bench.horizon, "auto or an interaction count");
  bench_cmd->add_option("--out", bench.out, "Records file (stdout if absent)");
  bench_cmd->add_option("--stats", bench.stats, "Per-n summary file");
  bench_cmd->add_option("--format", bench.format)->check(CLI::IsMember({"csv", "json"}));
  bench_cmd->add_option("--threads", bench.threads, "0 = hardware concurrency");
  bench_cmd->add_flag("--with-cost", bench.with_cost);

  OracleArgs orc;
  auto *oracle_cmd = app.add_subcommand("oracle", "Offline convergecast oracle");
  oracle_cmd->add_option("--seq", orc.seq)->required()->check(CLI::ExistingFile);
  oracle_cmd->add_option("--op", orc.op)->required()->check(
      CLI::IsMember({"opt", "T", "cost", "schedule"}));
  oracle_cmd->add_option("--t", orc.t)->check(CLI::NonNegativeNumber);
  oracle_cmd->add_option("--i", orc.i)->check(CLI::PositiveNumber);
  oracle_cmd->add_option("--algo", orc.algo)->check(algo_check);
  oracle_cmd->add_option("--tau", orc.tau);
  oracle_cmd->add_option("--horizon", orc.horizon)->check(CLI::NonNegativeNumber);

  AdversaryArgs adv;
  auto *adversary_cmd = app.add_subcommand("adversary", "Emit an adversarial sequence file");
  adversary_cmd->add_option("--family", adv.family)->required()->check(
      CLI::IsMember({"random", "theorem1", "theorem2", "theorem3"}));
  adversary_cmd->add_option("--n", adv.n)->check(CLI::Range(3u, 1u << 20));
  adversary_cmd->add_option("--seed", adv.seed);
  adversary_cmd->add_option("--l0", adv.l0);
  adversary_cmd->add_option("--d", adv.d);
  adversary_cmd->add_option("--reps", adv.reps);
  adversary_cmd->add_option("--horizon", adv.horizon)->check(CLI::NonNegativeNumber);
  adversary_cmd->add_option("--out", adv.out)->required();
  adversary_cmd->add_option("--algo", adv.algo)->check(algo_check);
  adversary_cmd->add_option("--tau", adv.tau);
  adversary_cmd->add_option("--trials", adv.trials, "Runs per l0 estimate")
      ->check(CLI::PositiveNumber);

  std::string cost_algo, cost_seq;
  std::optional<Time> cost_tau, cost_horizon;
  std::uint64_t cost_seed = 0;
  auto *cost_cmd = app.add_subcommand("cost", "Cost of an algorithm on a sequence file");
  cost_cmd->add_option("--algo", cost_algo)->required()->check(algo_check);
  cost_cmd->add_option("--tau", cost_tau);
  cost_cmd->add_option("--seq", cost_seq)->required()->check(CLI::ExistingFile);
  cost_cmd->add_option("--horizon", cost_horizon)->check(CLI::NonNegativeNumber);
  cost_cmd->add_option("--seed", cost_seed);

  std::string fit_in, fit_model = "power";
  auto *fit_cmd = app.add_subcommand("fit", "Log-log fit of mean interaction counts");
  fit_cmd->add_option("--in", fit_in)->required()->check(CLI::ExistingFile);
  fit_cmd->add_option("--model", fit_model)->check(CLI::IsMember({"power", "nlogn"}));

  CalibrateArgs cal;
  auto *calibrate_cmd = app.add_subcommand("calibrate", "Smallest c reaching the target");
  calibrate_cmd->add_option("--algo", cal.algo)->required()->check(
      CLI::IsMember({"waiting-greedy"}));
  calibrate_cmd->add_option("--n", cal.n)->required()->check(CLI::Range(3u, 1u << 20));
  calibrate_cmd->add_option("--target", cal.target)->check(CLI::Range(0.0, 1.0));
  calibrate_cmd->add_option("--trials", cal.trials)->check(CLI::PositiveNumber);
  calibrate_cmd->add_option("--seed", cal.seed);
  calibrate_cmd->add_option("--c-list", cal.c_list)->delimiter(',');
  calibrate_cmd->add_option("--threads", cal.threads);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError &e) {
    return app.exit(e) == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (*simulate_cmd)
      return run_simulate(sim);
    if (*bench_cmd)
      return run_bench(bench);
    if (*oracle_cmd)
      return run_oracle(orc);
    if (*adversary_cmd)
      return run_adversary(adv);
    if (*cost_cmd)
      return run_cost(cost_algo, cost_tau, cost_seq, cost_horizon, cost_seed);
    if (*fit_cmd)
      return run_fit(fit_in, fit_model);
    if (*calibrate_cmd)
      return run_calibrate(cal);
  } catch (const std::exception &e) {
    std::cerr << "doda: " << e.what() << '\n';
    return kExitUsage;
  }
  return kExitUsage;
}
