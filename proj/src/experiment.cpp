#include "contagion/experiment.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <future>
#include <numeric>
#include <random>
#include <sstream>
#include <thread>

#include <fmt/format.h>

#include "contagion/error.hpp"
#include "contagion/graph_io.hpp"
#include "contagion/percolation.hpp"
#include "contagion/presets.hpp"
#include "contagion/rng.hpp"

namespace contagion {
namespace {

constexpr const char* kMetricsHeader = "replicate,seed,time_to_fraction,growth_rate";
constexpr const char* kKeysFile = "comparison_keys.txt";

std::string Num(std::optional<double> v) {
  return v ? fmt::format("{:.10g}", *v) : std::string("NA");
}

std::optional<double> ParseOptional(const std::string& s) {
  if (s == "NA") return std::nullopt;
  return std::stod(s);
}

std::optional<MetricSummary> Summarize(const std::vector<ReplicateMetrics>& reps,
                                       std::optional<double> ReplicateMetrics::*field) {
  std::vector<double> values;
  for (const auto& r : reps) {
    if (r.*field) values.push_back(*(r.*field));
  }
  if (values.empty()) return std::nullopt;
  MetricSummary s;
  s.count = static_cast<int>(values.size());
  s.mean = std::accumulate(values.begin(), values.end(), 0.0) / static_cast<double>(values.size());
  if (values.size() > 1) {
    double ss = 0.0;
    for (double v : values) ss += (v - s.mean) * (v - s.mean);
    s.sd = std::sqrt(ss / static_cast<double>(values.size() - 1));
  }
  return s;
}

struct ReplicateOutput {
  ReplicateMetrics metrics;
  std::string csv;
};

ReplicateOutput RunReplicate(const ExperimentConfig& cfg, const Graph& g, int index) {
  ReplicateOutput out;
  const std::uint64_t seed = DeriveSeed(cfg.seed, static_cast<std::uint64_t>(index));
  out.metrics.replicate = index;
  out.metrics.seed = seed;

  Controls controls;
  if (cfg.vaccination) {
    controls.vaccinated = Vaccinate(g, *cfg.vaccination, DeriveSeed(seed, stream::kVaccination));
  }
  controls.throttle = cfg.throttle;
  controls.throttle_start = cfg.throttle_start;
  const auto infected = ChooseInitialInfected(g, controls.vaccinated, cfg.seed_infected,
                                              DeriveSeed(seed, stream::kSeedInfection));

  RunOptions options;
  options.dt = cfg.dt;
  options.t_max = cfg.t_max;
  options.seed = seed;
  options.stop_fraction = cfg.stop_fraction;
  const TimeSeries ts = Run(g, cfg.worm, controls, infected, options);

  out.metrics.time_to_fraction = TimeToFraction(ts, cfg.target_fraction);
  try {
    out.metrics.growth_rate = GrowthRate(ts);
  } catch (const InsufficientData&) {
    out.metrics.growth_rate = std::nullopt;
  }
  out.csv = ts.ToCsv();
  return out;
}

std::string ReplicateFileName(int i) { return fmt::format("replicate_{:03d}.csv", i); }

}  // namespace

std::optional<MetricSummary> ExperimentResult::time_to_fraction() const {
  return Summarize(replicates, &ReplicateMetrics::time_to_fraction);
}

std::optional<MetricSummary> ExperimentResult::growth_rate() const {
  return Summarize(replicates, &ReplicateMetrics::growth_rate);
}

Graph BuildNetwork(const ExperimentConfig& cfg) {
  if (cfg.graph_file) return ReadEdgeList(*cfg.graph_file);
  if (cfg.preset) return Generate(Preset(*cfg.preset, cfg.EffectiveNetworkSeed()));
  NetworkSpec spec = *cfg.network;
  spec.seed = cfg.EffectiveNetworkSeed();
  return Generate(spec);
}

std::vector<NodeId> ChooseInitialInfected(const Graph& g, const std::vector<NodeId>& vaccinated,
                                          int count, std::uint64_t seed) {
  std::vector<bool> blocked(g.num_nodes(), false);
  for (NodeId u : vaccinated) blocked[u] = true;
  std::vector<NodeId> pool;
  for (std::size_t u = 0; u < g.num_nodes(); ++u) {
    if (!blocked[u]) pool.push_back(static_cast<NodeId>(u));
  }
  if (count < 0 || static_cast<std::size_t>(count) > pool.size()) {
    throw ConfigError(fmt::format("cannot seed {} infections among {} unvaccinated hosts", count, pool.size()));
  }
  Rng rng = MakeRng(seed);
  for (int i = 0; i < count; ++i) {
    std::uniform_int_distribution<std::size_t> pick(static_cast<std::size_t>(i), pool.size() - 1);
    std::swap(pool[static_cast<std::size_t>(i)], pool[pick(rng)]);
  }
  pool.resize(static_cast<std::size_t>(count));
  std::sort(pool.begin(), pool.end());
  return pool;
}

ExperimentResult RunExperiment(const ExperimentConfig& cfg, unsigned threads) {
  if (cfg.replicates < 1) throw ConfigError("replicates must be at least 1");
  const Graph g = BuildNetwork(cfg);
  std::filesystem::create_directories(cfg.output_dir);

  ExperimentResult result;
  result.output_dir = cfg.output_dir;
  result.network_key = cfg.NetworkKey();
  result.worm_key = cfg.WormKey();
  result.controls_key = cfg.ControlsKey();
  result.target_fraction = cfg.target_fraction;

  WriteFileAtomically(cfg.output_dir / "resolved_config.ini", cfg.Resolved());
  WriteFileAtomically(cfg.output_dir / kKeysFile,
                      fmt::format("network: {}\nworm: {}\ncontrols: {}\ntarget_fraction: {:.10g}\n",
                                  result.network_key, result.worm_key, result.controls_key,
                                  cfg.target_fraction));
  {
    std::string seeds = "replicate,seed\n";
    for (int i = 0; i < cfg.replicates; ++i) {
      seeds += fmt::format("{},{}\n", i, DeriveSeed(cfg.seed, static_cast<std::uint64_t>(i)));
    }
    WriteFileAtomically(cfg.output_dir / "seeds.csv", seeds);
  }

  if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
  const auto total = static_cast<std::size_t>(cfg.replicates);
  std::vector<ReplicateMetrics> metrics(total);
  // Replicates are processed in waves of `threads`; each writes its own file.
  for (std::size_t start = 0; start < total; start += threads) {
    const std::size_t end = std::min(total, start + threads);
    std::vector<std::future<ReplicateOutput>> wave;
    for (std::size_t i = start; i < end; ++i) {
      const auto launch = threads == 1 ? std::launch::deferred : std::launch::async;
      wave.push_back(std::async(launch, RunReplicate, std::cref(cfg), std::cref(g), static_cast<int>(i)));
    }
    for (std::size_t i = start; i < end; ++i) {
      ReplicateOutput out = wave[i - start].get();
      WriteFileAtomically(cfg.output_dir / ReplicateFileName(static_cast<int>(i)), out.csv);
      metrics[i] = out.metrics;
    }
  }

  result.replicates = metrics;
  for (std::size_t i = 0; i < total; ++i) {
    result.series.push_back(cfg.output_dir / ReplicateFileName(static_cast<int>(i)));
  }

  std::string mcsv = std::string(kMetricsHeader) + "\n";
  for (const auto& m : metrics) {
    mcsv += fmt::format("{},{},{},{}\n", m.replicate, m.seed, Num(m.time_to_fraction), Num(m.growth_rate));
  }
  WriteFileAtomically(cfg.output_dir / "metrics.csv", mcsv);

  std::string scsv = "metric,mean,sd,count,replicates\n";
  for (const auto& [name, summary] :
       {std::pair{"time_to_fraction", result.time_to_fraction()}, std::pair{"growth_rate", result.growth_rate()}}) {
    if (summary) {
      scsv += fmt::format("{},{:.10g},{:.10g},{},{}\n", name, summary->mean, summary->sd, summary->count, total);
    } else {
      scsv += fmt::format("{},NA,NA,0,{}\n", name, total);
    }
  }
  WriteFileAtomically(cfg.output_dir / "summary.csv", scsv);
  return result;
}

ExperimentResult LoadExperimentResult(const std::filesystem::path& dir) {
  ExperimentResult result;
  result.output_dir = dir;
  {
    std::ifstream in(dir / kKeysFile);
    if (!in) throw ConfigError("not an experiment output directory: " + dir.string());
    std::string line;
    while (std::getline(in, line)) {
      const auto colon = line.find(": ");
      if (colon == std::string::npos) continue;
      const auto key = line.substr(0, colon);
      const auto value = line.substr(colon + 2);
      if (key == "network") result.network_key = value;
      else if (key == "worm") result.worm_key = value;
      else if (key == "controls") result.controls_key = value;
      else if (key == "target_fraction") result.target_fraction = std::stod(value);
    }
  }
  std::ifstream in(dir / "metrics.csv");
  if (!in) throw ConfigError("missing metrics.csv in " + dir.string());
  std::string line;
  std::getline(in, line);
  if (line != kMetricsHeader) throw ConfigError("unexpected metrics.csv header in " + dir.string());
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::stringstream ss(line);
    std::string a, b, c, d;
    std::getline(ss, a, ',');
    std::getline(ss, b, ',');
    std::getline(ss, c, ',');
    std::getline(ss, d, ',');
    ReplicateMetrics m;
    m.replicate = std::stoi(a);
    m.seed = std::stoull(b);
    m.time_to_fraction = ParseOptional(c);
    m.growth_rate = ParseOptional(d);
    result.replicates.push_back(m);
    result.series.push_back(dir / ReplicateFileName(m.replicate));
  }
  return result;
}

std::vector<SlowdownRow> Compare(const ExperimentResult& baseline, const ExperimentResult& treated) {
  if (baseline.network_key != treated.network_key) {
    throw ConfigError("cannot compare runs on different networks (" + baseline.network_key + " vs " +
                      treated.network_key + ")");
  }
  if (baseline.worm_key != treated.worm_key) {
    throw ConfigError("cannot compare runs with different worms (" + baseline.worm_key + " vs " +
                      treated.worm_key + ")");
  }
  if (baseline.controls_key == treated.controls_key) {
    throw ConfigError("baseline and treated runs use identical controls (" + baseline.controls_key + ")");
  }
  std::vector<SlowdownRow> rows;
  {
    SlowdownRow row{"time_to_fraction", {}, {}, {}};
    const auto b = baseline.time_to_fraction();
    const auto t = treated.time_to_fraction();
    if (b) row.baseline = b->mean;
    if (t) row.treated = t->mean;
    if (b && t && b->mean > 0.0) row.slowdown = t->mean / b->mean;
    rows.push_back(row);
  }
  {
    SlowdownRow row{"growth_rate", {}, {}, {}};
    const auto b = baseline.growth_rate();
    const auto t = treated.growth_rate();
    if (b) row.baseline = b->mean;
    if (t) row.treated = t->mean;
    if (b && t && t->mean > 0.0) row.slowdown = b->mean / t->mean;
    rows.push_back(row);
  }
  return rows;
}

std::string SlowdownCsv(const std::vector<SlowdownRow>& rows) {
  std::string out = std::string(kSlowdownHeader) + "\n";
  for (const auto& r : rows) {
    out += fmt::format("{},{},{},{}\n", r.metric, Num(r.baseline), Num(r.treated), Num(r.slowdown));
  }
  return out;
}

}  // namespace contagion
