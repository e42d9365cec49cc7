#include "doda/harness.hpp"

#include "doda/adversaries.hpp"
#include "doda/oracle.hpp"

#include "json.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <exception>
#include <fstream>
#include <map>
#include <mutex>
#include <sstream>
#include <thread>

namespace doda {

using ordered_json = nlohmann::ordered_json;

Time TauRule::resolve(NodeCount n) const {
  if (fixed)
    return *fixed;
  const double x = static_cast<double>(n);
  return static_cast<Time>(std::floor(c * std::pow(x, 1.5) * std::sqrt(std::log(x))));
}

Time HorizonRule::resolve(NodeCount n, std::optional<Time> tau) const {
  if (fixed)
    return *fixed;
  const Time n2 = static_cast<Time>(n) * static_cast<Time>(n);
  return std::max<Time>(20 * n2, tau ? 10 * *tau : 0);
}

void ExperimentConfig::validate() const {
  if (trials < 1)
    throw ConfigurationError("trials must be at least 1");
  if (sizes.empty())
    throw ConfigurationError("no node counts given");
  for (auto n : sizes)
    if (n < kMinNodes)
      throw ConfigurationError("every n must be at least 3");
  if (uses_tau() && tau.c <= 0.0 && !tau.fixed)
    throw ConfigurationError("tau constant must be positive");
  for (auto n : sizes) {
    std::optional<Time> t;
    if (uses_tau())
      t = tau.resolve(n);
    const Time h = horizon.resolve(n, t);
    if (h < 1)
      throw ConfigurationError("horizon must be positive");
    if (t && h < *t)
      throw ConfigurationError("horizon " + std::to_string(h) +
                               " is shorter than tau " + std::to_string(*t) +
                               " at n = " + std::to_string(n));
  }
  AlgorithmOptions options;
  if (uses_tau())
    options.tau = tau.resolve(sizes.front());
  (void)make_algorithm(algorithm, options);
}

std::uint64_t trial_seed(std::uint64_t base, NodeCount n, std::size_t trial) {
  return derive_seed(base, n, trial);
}

TrialRecord run_trial(const ExperimentConfig &config, NodeCount n,
                      std::size_t trial) {
  TrialRecord record;
  record.algo = config.algorithm;
  record.n = n;
  record.trial = trial;
  record.seed = trial_seed(config.seed, n, trial);
  if (config.uses_tau())
    record.tau = config.tau.resolve(n);

  const auto algorithm = make_algorithm(config.algorithm, {record.tau});
  const std::uint64_t rule_seed = derive_seed(record.seed, 1);
  Time horizon = config.horizon.resolve(n, record.tau);
  const int widenings = config.horizon.is_auto() ? HorizonRule::kMaxWidenings : 0;

  ExecutionTrace trace;
  for (int k = 0;; ++k) {
    if (algorithm.requirements.empty()) {
      RandomStream stream(n, record.seed);
      trace = simulate(algorithm, stream, horizon, rule_seed);
    } else {
      const auto prefix = RandomStream(n, record.seed)
                              .prefix(static_cast<std::size_t>(horizon));
      trace = simulate(algorithm, prefix, horizon, rule_seed);
    }
    if (trace.terminated || k == widenings)
      break;
    horizon *= 2;
  }

  record.horizon = horizon;
  record.terminated = trace.terminated;
  record.duration = trace.duration;
  if (record.tau)
    record.terminated_by_tau = trace.terminated && trace.duration <= *record.tau;
  if (config.with_cost) {
    const auto prefix =
        RandomStream(n, record.seed).prefix(static_cast<std::size_t>(horizon));
    const auto report = cost_of_duration(trace.duration, prefix);
    if (report.verdict == Verdict::determined)
      record.cost = report.cost;
  }
  return record;
}

std::vector<TrialRecord> run_trials(const ExperimentConfig &config) {
  config.validate();
  std::vector<std::pair<NodeCount, std::size_t>> jobs;
  auto sizes = config.sizes;
  std::sort(sizes.begin(), sizes.end());
  sizes.erase(std::unique(sizes.begin(), sizes.end()), sizes.end());
  for (auto n : sizes)
    for (std::size_t k = 0; k < config.trials; ++k)
      jobs.emplace_back(n, k);

  std::vector<TrialRecord> records(jobs.size());
  unsigned threads = config.threads == 0 ? std::thread::hardware_concurrency()
                                         : config.threads;
  threads = std::max(1u, std::min<unsigned>(threads, static_cast<unsigned>(jobs.size())));

  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_lock;
  auto worker = [&] {
    for (;;) {
      const std::size_t i = next.fetch_add(1);
      if (i >= jobs.size())
        return;
      try {
        records[i] = run_trial(config, jobs[i].first, jobs[i].second);
      } catch (...) {
        std::lock_guard lock(failure_lock);
        if (!failure)
          failure = std::current_exception();
        next = jobs.size();
        return;
      }
    }
  };

  if (threads == 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    for (unsigned t = 0; t < threads; ++t)
      pool.emplace_back(worker);
  }
  if (failure)
    std::rethrow_exception(failure);
  return records;
}

double quantile(std::span<const double> sorted, double q) {
  if (sorted.empty())
    throw ContractViolation("quantile of an empty sample");
  const double h = (static_cast<double>(sorted.size()) - 1.0) * q;
  const auto lo = static_cast<std::size_t>(std::floor(h));
  if (lo + 1 >= sorted.size())
    return sorted.back();
  return sorted[lo] + (h - static_cast<double>(lo)) * (sorted[lo + 1] - sorted[lo]);
}

std::vector<SummaryStats> summarize(std::span<const TrialRecord> records) {
  if (records.empty())
    throw ContractViolation("cannot summarize an empty record set");
  std::map<NodeCount, std::vector<const TrialRecord *>> by_n;
  for (const auto &r : records) {
    if (r.algo != records.front().algo)
      throw ContractViolation("records mix algorithms '" + records.front().algo +
                              "' and '" + r.algo + "'");
    by_n[r.n].push_back(&r);
  }

  std::vector<SummaryStats> out;
  for (const auto &[n, group] : by_n) {
    SummaryStats s;
    s.algo = records.front().algo;
    s.n = n;
    s.trials = group.size();
    std::vector<double> values;
    for (const auto *r : group)
      if (r->terminated)
        values.push_back(static_cast<double>(r->duration));
    s.terminated = values.size();
    s.termination_fraction =
        static_cast<double>(s.terminated) / static_cast<double>(s.trials);
    if (!values.empty()) {
      std::sort(values.begin(), values.end());
      double sum = 0.0;
      for (double v : values)
        sum += v;
      const double mean = sum / static_cast<double>(values.size());
      s.mean = mean;
      if (values.size() > 1) {
        double ss = 0.0;
        for (double v : values)
          ss += (v - mean) * (v - mean);
        s.variance = ss / static_cast<double>(values.size() - 1);
      }
      s.p50 = quantile(values, 0.50);
      s.p95 = quantile(values, 0.95);
      s.p99 = quantile(values, 0.99);
    }
    out.push_back(s);
  }
  return out;
}

namespace {

FitResult least_squares(FitModel model, std::span<const FitPoint> points,
                        bool divide_by_log) {
  if (points.size() < 3)
    throw ContractViolation("a fit needs at least 3 points");
  std::vector<double> xs;
  std::vector<double> ys;
  for (const auto &p : points) {
    if (!(p.n > 0.0) || !(p.value > 0.0))
      throw ContractViolation("fit points must be positive");
    if (divide_by_log && !(p.n > 1.0))
      throw ContractViolation("n log n fit needs n > 1");
    xs.push_back(std::log(p.n));
    ys.push_back(std::log(divide_by_log ? p.value / std::log(p.n) : p.value));
  }
  const double k = static_cast<double>(xs.size());
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    mx += xs[i];
    my += ys[i];
  }
  mx /= k;
  my /= k;
  double sxy = 0.0, sxx = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    sxy += (xs[i] - mx) * (ys[i] - my);
    sxx += (xs[i] - mx) * (xs[i] - mx);
  }
  if (sxx == 0.0)
    throw ContractViolation("fit needs at least two distinct n");
  const double slope = sxy / sxx;
  const double intercept = my - slope * mx;
  double rss = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    const double r = ys[i] - (intercept + slope * xs[i]);
    rss += r * r;
  }
  return {model, slope, std::exp(intercept), std::sqrt(rss / k)};
}

} // namespace

FitResult fit_power_law(std::span<const FitPoint> points) {
  return least_squares(FitModel::power, points, false);
}

FitResult fit_n_log_n(std::span<const FitPoint> points) {
  return least_squares(FitModel::n_log_n, points, true);
}

FitResult fit(FitModel model, std::span<const FitPoint> points) {
  return model == FitModel::power ? fit_power_law(points) : fit_n_log_n(points);
}

double termination_by_tau_fraction(std::span<const TrialRecord> records) {
  if (records.empty())
    return 0.0;
  std::size_t hit = 0;
  for (const auto &r : records)
    hit += r.terminated_by_tau ? 1 : 0;
  return static_cast<double>(hit) / static_cast<double>(records.size());
}

Calibration calibrate_tau(NodeCount n, double target,
                          std::span<const double> candidates,
                          std::size_t trials, std::uint64_t seed,
                          unsigned threads) {
  std::vector<double> cs(candidates.begin(), candidates.end());
  std::sort(cs.begin(), cs.end());
  Calibration result;
  for (double c : cs) {
    ExperimentConfig config;
    config.algorithm = "waiting-greedy";
    config.tau.c = c;
    config.sizes = {n};
    config.trials = trials;
    config.seed = seed;
    config.threads = threads;
    const auto records = run_trials(config);
    const double fraction = termination_by_tau_fraction(records);
    result.scanned.emplace_back(c, fraction);
    if (fraction >= target) {
      result.c = c;
      break;
    }
  }
  return result;
}

std::string format_fixed(double value, int digits) {
  char buffer[64];
  std::snprintf(buffer, sizeof buffer, "%.*f", digits, value);
  return buffer;
}

std::string records_to_csv(std::span<const TrialRecord> records) {
  std::string out = "algo,n,seed,trial,duration,terminated,cost\n";
  for (const auto &r : records) {
    out += r.algo + ',' + std::to_string(r.n) + ',' + std::to_string(r.seed) +
           ',' + std::to_string(r.trial) + ',';
    if (r.terminated)
      out += std::to_string(r.duration);
    out += r.terminated ? ",1," : ",0,";
    if (r.cost)
      out += *r.cost == kInfiniteCost ? "inf" : std::to_string(*r.cost);
    out += '\n';
  }
  return out;
}

namespace {

std::vector<std::string> split_csv_line(std::string_view line) {
  std::vector<std::string> cells;
  std::size_t start = 0;
  for (;;) {
    const auto comma = line.find(',', start);
    cells.emplace_back(line.substr(start, comma - start));
    if (comma == std::string_view::npos)
      break;
    start = comma + 1;
  }
  return cells;
}

ordered_json record_json(const TrialRecord &r) {
  ordered_json j;
  j["algo"] = r.algo;
  j["n"] = r.n;
  j["seed"] = r.seed;
  j["trial"] = r.trial;
  j["duration"] = r.terminated ? ordered_json(r.duration) : ordered_json(nullptr);
  j["terminated"] = r.terminated;
  j["tau"] = r.tau ? ordered_json(*r.tau) : ordered_json(nullptr);
  j["terminated_by_tau"] = r.terminated_by_tau;
  if (!r.cost)
    j["cost"] = nullptr;
  else if (*r.cost == kInfiniteCost)
    j["cost"] = "inf";
  else
    j["cost"] = *r.cost;
  j["horizon"] = r.horizon;
  return j;
}

ordered_json optional_number(const std::optional<double> &v) {
  return v ? ordered_json(*v) : ordered_json(nullptr);
}

std::string optional_fixed(const std::optional<double> &v) {
  return v ? format_fixed(*v) : std::string();
}

} // namespace

std::vector<TrialRecord> records_from_csv(std::string_view text) {
  std::vector<TrialRecord> out;
  std::size_t line_no = 0;
  std::size_t pos = 0;
  while (pos < text.size()) {
    auto eol = text.find('\n', pos);
    if (eol == std::string_view::npos)
      eol = text.size();
    auto line = text.substr(pos, eol - pos);
    pos = eol + 1;
    ++line_no;
    if (!line.empty() && line.back() == '\r')
      line.remove_suffix(1);
    if (line.empty())
      continue;
    if (line_no == 1) {
      if (line != "algo,n,seed,trial,duration,terminated,cost")
        throw ParseError(line_no, "unexpected CSV header");
      continue;
    }
    const auto cells = split_csv_line(line);
    if (cells.size() != 7)
      throw ParseError(line_no, "expected 7 columns");
    try {
      TrialRecord r;
      r.algo = cells[0];
      r.n = static_cast<NodeCount>(std::stoul(cells[1]));
      r.seed = std::stoull(cells[2]);
      r.trial = std::stoull(cells[3]);
      r.terminated = cells[5] == "1";
      if (r.terminated)
        r.duration = std::stoll(cells[4]);
      if (cells[6] == "inf")
        r.cost = kInfiniteCost;
      else if (!cells[6].empty())
        r.cost = std::stoll(cells[6]);
      out.push_back(std::move(r));
    } catch (const std::logic_error &) {
      throw ParseError(line_no, "malformed number");
    }
  }
  return out;
}

std::string records_to_json(std::span<const TrialRecord> records) {
  ordered_json array = ordered_json::array();
  for (const auto &r : records)
    array.push_back(record_json(r));
  return array.dump(2) + "\n";
}

std::vector<TrialRecord> records_from_json(std::string_view text) {
  const auto array = nlohmann::json::parse(text);
  std::vector<TrialRecord> out;
  for (const auto &j : array) {
    TrialRecord r;
    r.algo = j.at("algo").get<std::string>();
    r.n = j.at("n").get<NodeCount>();
    r.seed = j.at("seed").get<std::uint64_t>();
    r.trial = j.at("trial").get<std::size_t>();
    r.terminated = j.at("terminated").get<bool>();
    if (!j.at("duration").is_null())
      r.duration = j.at("duration").get<Time>();
    if (!j.at("tau").is_null())
      r.tau = j.at("tau").get<Time>();
    r.terminated_by_tau = j.at("terminated_by_tau").get<bool>();
    const auto &cost = j.at("cost");
    if (cost.is_string())
      r.cost = kInfiniteCost;
    else if (!cost.is_null())
      r.cost = cost.get<std::int64_t>();
    r.horizon = j.at("horizon").get<Time>();
    out.push_back(std::move(r));
  }
  return out;
}

std::string stats_to_csv(std::span<const SummaryStats> stats) {
  std::string out =
      "algo,n,trials,terminated,termination_fraction,mean,variance,p50,p95,p99\n";
  for (const auto &s : stats) {
    out += s.algo + ',' + std::to_string(s.n) + ',' + std::to_string(s.trials) +
           ',' + std::to_string(s.terminated) + ',' +
           format_fixed(s.termination_fraction) + ',' + optional_fixed(s.mean) +
           ',' + optional_fixed(s.variance) + ',' + optional_fixed(s.p50) + ',' +
           optional_fixed(s.p95) + ',' + optional_fixed(s.p99) + '\n';
  }
  return out;
}

std::string stats_to_json(std::span<const SummaryStats> stats) {
  ordered_json array = ordered_json::array();
  for (const auto &s : stats) {
    ordered_json j;
    j["algo"] = s.algo;
    j["n"] = s.n;
    j["trials"] = s.trials;
    j["terminated"] = s.terminated;
    j["termination_fraction"] = s.termination_fraction;
    j["mean"] = optional_number(s.mean);
    j["variance"] = optional_number(s.variance);
    j["p50"] = optional_number(s.p50);
    j["p95"] = optional_number(s.p95);
    j["p99"] = optional_number(s.p99);
    array.push_back(j);
  }
  return array.dump(2) + "\n";
}

std::string trace_to_json(const ExecutionTrace &trace, std::string_view algo,
                          NodeCount n, std::optional<std::uint64_t> seed,
                          bool with_events) {
  ordered_json j;
  j["algo"] = algo;
  j["n"] = n;
  if (seed)
    j["seed"] = *seed;
  if (with_events) {
    j["events"] = ordered_json::array();
    for (const auto &e : trace.events)
      j["events"].push_back(
          {{"t", e.time}, {"sender", e.sender}, {"receiver", e.receiver}});
  }
  j["terminated"] = trace.terminated;
  j["duration"] =
      trace.terminated ? ordered_json(trace.duration) : ordered_json(nullptr);
  return j.dump(2) + "\n";
}

void write_text_file(const std::filesystem::path &path, std::string_view text) {
  std::ofstream out(path, std::ios::binary);
  if (!out)
    throw Error("cannot write " + path.string());
  out.write(text.data(), static_cast<std::streamsize>(text.size()));
  if (!out)
    throw Error("failed writing " + path.string());
}

std::string read_text_file(const std::filesystem::path &path) {
  std::ifstream in(path, std::ios::binary);
  if (!in)
    throw Error("cannot open " + path.string());
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

} // namespace doda
