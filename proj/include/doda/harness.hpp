#pragma once

#include "doda/algorithms.hpp"

#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace doda {

/// Waiting Greedy threshold: a fixed value, or c * n^{3/2} * sqrt(ln n)
/// rounded down.
struct TauRule {
  std::optional<Time> fixed;
  double c = 2.0;

  Time resolve(NodeCount n) const;
};

/// Simulation horizon: a fixed value, or auto = max(20 n^2, 10 tau). Auto
/// horizons are doubled (up to kMaxWidenings times) when a run is still
/// unfinished at the horizon, so means are not censored.
struct HorizonRule {
  std::optional<Time> fixed;

  Time resolve(NodeCount n, std::optional<Time> tau) const;
  bool is_auto() const { return !fixed; }

  static constexpr int kMaxWidenings = 6;
};

struct ExperimentConfig {
  std::string algorithm;
  TauRule tau;
  std::vector<NodeCount> sizes;
  std::size_t trials = 1;
  std::uint64_t seed = 0;
  HorizonRule horizon;
  /// Worker threads; 0 means hardware concurrency.
  unsigned threads = 1;
  bool with_cost = false;

  void validate() const;
  bool uses_tau() const { return algorithm == "waiting-greedy"; }
};

struct TrialRecord {
  std::string algo;
  NodeCount n = 0;
  std::uint64_t seed = 0;
  std::size_t trial = 0;
  Time duration = kNever;
  bool terminated = false;
  std::optional<Time> tau;
  bool terminated_by_tau = false;
  std::optional<std::int64_t> cost;
  Time horizon = 0;

  /// Number of interactions up to and including the last transmission.
  std::optional<double> interactions() const {
    if (!terminated)
      return std::nullopt;
    return static_cast<double>(duration) + 1.0;
  }
};

/// Seed of trial `trial` at size `n`.
std::uint64_t trial_seed(std::uint64_t base, NodeCount n, std::size_t trial);

/// One trial on the randomized stream. Algorithms without knowledge are fed
/// straight from the generator; the others run on a materialized prefix.
TrialRecord run_trial(const ExperimentConfig &config, NodeCount n,
                      std::size_t trial);

/// Every (n, trial) pair, sorted by n then trial regardless of threading.
std::vector<TrialRecord> run_trials(const ExperimentConfig &config);

struct SummaryStats {
  std::string algo;
  NodeCount n = 0;
  std::size_t trials = 0;
  std::size_t terminated = 0;
  double termination_fraction = 0.0;
  /// Over terminated runs only; nullopt when none terminated.
  std::optional<double> mean;
  std::optional<double> variance;
  std::optional<double> p50;
  std::optional<double> p95;
  std::optional<double> p99;
};

/// Per-n statistics of duration for a single algorithm's records.
std::vector<SummaryStats> summarize(std::span<const TrialRecord> records);

/// Linear-interpolation quantile of sorted values, q in [0, 1].
double quantile(std::span<const double> sorted, double q);

enum class FitModel { power, n_log_n };

struct FitPoint {
  double n;
  double value;
};

struct FitResult {
  FitModel model;
  /// Power: slope of log y on log n. n-log-n: slope of log(y / ln n) on log n.
  double exponent;
  /// exp(intercept) of the same regression.
  double coefficient;
  /// RMS of the log residuals.
  double residual;
};

FitResult fit_power_law(std::span<const FitPoint> points);
FitResult fit_n_log_n(std::span<const FitPoint> points);
FitResult fit(FitModel model, std::span<const FitPoint> points);

struct Calibration {
  std::optional<double> c;
  /// (c, fraction terminated by tau) for every scanned value, in order.
  std::vector<std::pair<double, double>> scanned;
};

/// Scans `candidates` in ascending order and returns the smallest c whose
/// Waiting Greedy runs finish by tau in at least `target` of the trials.
Calibration calibrate_tau(NodeCount n, double target,
                          std::span<const double> candidates,
                          std::size_t trials, std::uint64_t seed,
                          unsigned threads = 1);

double termination_by_tau_fraction(std::span<const TrialRecord> records);

// Output. Fixed field order, fixed float formatting, trailing newline.

/// Header: algo,n,seed,trial,duration,terminated,cost
std::string records_to_csv(std::span<const TrialRecord> records);
std::string records_to_json(std::span<const TrialRecord> records);
std::vector<TrialRecord> records_from_csv(std::string_view text);
std::vector<TrialRecord> records_from_json(std::string_view text);

std::string stats_to_csv(std::span<const SummaryStats> stats);
std::string stats_to_json(std::span<const SummaryStats> stats);

std::string trace_to_json(const ExecutionTrace &trace, std::string_view algo,
                          NodeCount n, std::optional<std::uint64_t> seed,
                          bool with_events);

std::string format_fixed(double value, int digits = 6);

void write_text_file(const std::filesystem::path &path, std::string_view text);
std::string read_text_file(const std::filesystem::path &path);

} // namespace doda
