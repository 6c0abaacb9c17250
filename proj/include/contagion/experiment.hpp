#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "contagion/config.hpp"
#include "contagion/epidemic.hpp"
#include "contagion/graph.hpp"

namespace contagion {

struct ReplicateMetrics {
  int replicate = 0;
  std::uint64_t seed = 0;
  std::optional<double> time_to_fraction;
  std::optional<double> growth_rate;
};

struct MetricSummary {
  double mean = 0.0;
  double sd = 0.0;
  /// Replicates that produced a value.
  int count = 0;
};

struct ExperimentResult {
  std::filesystem::path output_dir;
  std::string network_key;
  std::string worm_key;
  std::string controls_key;
  double target_fraction = 0.95;
  std::vector<ReplicateMetrics> replicates;
  /// Paths of the per-replicate TimeSeries CSVs, in replicate order.
  std::vector<std::filesystem::path> series;

  std::optional<MetricSummary> time_to_fraction() const;
  std::optional<MetricSummary> growth_rate() const;
};

/// Builds the graph an experiment runs on.
Graph BuildNetwork(const ExperimentConfig& cfg);

/// Seed-infected hosts for one replicate: `count` distinct hosts drawn
/// uniformly from the unvaccinated ones.
std::vector<NodeId> ChooseInitialInfected(const Graph& g, const std::vector<NodeId>& vaccinated,
                                          int count, std::uint64_t seed);

/// Runs every replicate and writes, into cfg.output_dir:
///
///   resolved_config.ini   every setting actually used
///   seeds.csv             replicate,seed
///   replicate_NNN.csv     TimeSeries per replicate
///   metrics.csv           replicate,seed,time_to_fraction,growth_rate
///   summary.csv           metric,mean,sd,count,replicates
///
/// Replicate i uses DeriveSeed(cfg.seed, i). Files are written atomically.
/// Replicates run on up to `threads` workers (0 = hardware concurrency);
/// results do not depend on the thread count.
ExperimentResult RunExperiment(const ExperimentConfig& cfg, unsigned threads = 0);

/// Reads back the metrics and comparison keys of a finished experiment.
ExperimentResult LoadExperimentResult(const std::filesystem::path& dir);

struct SlowdownRow {
  std::string metric;
  std::optional<double> baseline;
  std::optional<double> treated;
  std::optional<double> slowdown;
};

/// Slowdown of `treated` relative to `baseline`, using replicate means:
/// time_to_fraction as treated/baseline and growth_rate as baseline/treated.
/// Throws ConfigError unless both share network and worm and differ in
/// controls.
std::vector<SlowdownRow> Compare(const ExperimentResult& baseline, const ExperimentResult& treated);

inline constexpr const char* kSlowdownHeader = "metric,baseline,treated,slowdown_factor";
std::string SlowdownCsv(const std::vector<SlowdownRow>& rows);

}  // namespace contagion
