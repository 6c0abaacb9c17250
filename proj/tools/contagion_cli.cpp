// contagion: command-line front end for network generation, spreading
// simulation, vaccination thresholds, throttle replay and experiments.

#include <cmath>
#include <fstream>
#include <iostream>
#include <limits>
#include <sstream>
#include <string>

#include <fmt/format.h>

#include "CLI11.hpp"
#include "contagion/config.hpp"
#include "contagion/degree_distribution.hpp"
#include "contagion/epidemic.hpp"
#include "contagion/error.hpp"
#include "contagion/experiment.hpp"
#include "contagion/generators.hpp"
#include "contagion/graph_io.hpp"
#include "contagion/percolation.hpp"
#include "contagion/presets.hpp"
#include "contagion/rng.hpp"
#include "contagion/throttle_trace.hpp"

namespace {

using namespace contagion;

std::vector<Peak> ParsePeakList(const std::string& text) {
  std::vector<Peak> peaks;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    const auto colon = item.find(':');
    if (colon == std::string::npos) throw ConfigError("peaks expect 'degree:weight,...'");
    peaks.push_back({std::stoi(item.substr(0, colon)), std::stod(item.substr(colon + 1))});
  }
  return peaks;
}

std::string ThresholdCsv(const std::vector<ThresholdResult>& results) {
  std::string out = "strategy,f_c,method,s_min,trials,ci_halfwidth\n";
  for (const auto& r : results) {
    out += fmt::format("{},{:.10g},{},{:.10g},{},{:.10g}\n", ToString(r.kind), r.f_c, ToString(r.method),
                       r.s_min, r.trials, r.ci_halfwidth);
  }
  return out;
}

struct GenerateArgs {
  std::string preset;
  std::string family;
  std::size_t n = 0;
  bool directed = false;
  double alpha = 2.5;
  int k_min = 1;
  int k_max = 100;
  std::string peaks;
  std::string histogram;
  std::uint64_t seed = 1;
  std::string out;
  std::string histogram_out;
};

void RunGenerate(const GenerateArgs& a) {
  NetworkSpec spec;
  if (!a.preset.empty()) {
    spec = Preset(a.preset, a.seed);
  } else {
    if (a.family.empty()) throw ConfigError("generate needs --preset or --family");
    spec.family = ParseFamily(a.family);
    spec.n = a.n;
    spec.directed = a.directed;
    spec.alpha = a.alpha;
    spec.k_min = a.k_min;
    spec.k_max = a.k_max;
    spec.seed = a.seed;
    if (!a.peaks.empty()) spec.peaks = ParsePeakList(a.peaks);
    if (!a.histogram.empty()) {
      spec.distribution = ReadDegreeHistogram(a.histogram);
      if (spec.n == 0) spec.n = static_cast<std::size_t>(spec.distribution->num_nodes());
    }
  }
  const Graph g = Generate(spec);
  WriteEdgeList(g, std::filesystem::path(a.out));
  if (!a.histogram_out.empty()) {
    std::ostringstream h;
    WriteDegreeHistogram(ComputeDegreeDistribution(g), h);
    WriteFileAtomically(a.histogram_out, h.str());
  }
}

struct SimulateArgs {
  std::string graph;
  std::string targeting = "neighbor";
  double rate = 400.0;
  double pinfect = 1.0;
  std::uint64_t address_space = 0;
  double throttle_rate = 0.0;
  std::size_t working_set = 4;
  std::string throttle_start = "phase";
  std::string vaccinate;
  double fraction = 0.0;
  int seed_infected = 1;
  double dt = 0.1;
  double tmax = 3600.0;
  std::uint64_t seed = 1;
  std::string out;
};

void RunSimulate(const SimulateArgs& a) {
  const Graph g = ReadEdgeList(a.graph);
  WormBehavior worm;
  worm.targeting = ParseTargeting(a.targeting);
  worm.attempt_rate = a.rate;
  worm.infection_probability = a.pinfect;
  worm.address_space = a.address_space;

  Controls controls;
  if (!a.vaccinate.empty()) {
    controls.vaccinated = Vaccinate(g, {ParseVaccinationKind(a.vaccinate), a.fraction},
                                    DeriveSeed(a.seed, stream::kVaccination));
  }
  if (a.throttle_rate > 0.0) {
    ThrottleConfig tc;
    tc.rate = a.throttle_rate;
    tc.working_set_capacity = a.working_set;
    controls.throttle = tc;
    controls.throttle_start = ParseThrottleStart(a.throttle_start);
  }
  const auto infected = ChooseInitialInfected(g, controls.vaccinated, a.seed_infected,
                                              DeriveSeed(a.seed, stream::kSeedInfection));
  RunOptions options;
  options.dt = a.dt;
  options.t_max = a.tmax;
  options.seed = a.seed;
  const auto ts = Run(g, worm, controls, infected, options);
  WriteFileAtomically(a.out, ts.ToCsv());
}

struct ThresholdArgs {
  std::string graph;
  std::string strategy = "random";
  double s_min = 0.01;
  int trials = 10;
  std::uint64_t seed = 1;
  std::string method = "empirical";
  std::string out;
};

void RunThreshold(const ThresholdArgs& a) {
  const Graph g = ReadEdgeList(a.graph);
  const auto kind = ParseVaccinationKind(a.strategy);
  std::vector<ThresholdResult> results;
  if (a.method == "empirical" || a.method == "both") {
    results.push_back(EmpiricalThreshold(g, kind, a.s_min, a.trials, a.seed));
  }
  if (a.method == "analytical" || a.method == "both") {
    auto r = AnalyticalThreshold(ComputeDegreeDistribution(g), kind);
    r.s_min = a.s_min;
    results.push_back(r);
  }
  if (results.empty()) throw ConfigError("--method must be empirical|analytical|both");
  WriteFileAtomically(a.out, ThresholdCsv(results));
  if (results.front().non_monotone) {
    std::cerr << "contagion: warning: giant-component response was not monotone in f\n";
  }
}

struct ThrottleDemoArgs {
  std::string trace;
  double rate = 1.0;
  std::size_t working_set = 4;
  std::size_t queue_capacity = 0;
  std::string out;
};

void RunThrottleDemo(const ThrottleDemoArgs& a) {
  std::ifstream in(a.trace);
  if (!in) throw std::runtime_error("cannot open " + a.trace);
  const auto trace = ParseTrace(in, a.trace);
  ThrottleConfig tc;
  tc.rate = a.rate;
  tc.working_set_capacity = a.working_set;
  if (a.queue_capacity > 0) tc.queue_capacity = a.queue_capacity;
  const auto decisions = ReplayTrace(trace, tc);
  std::ostringstream out;
  WriteDecisionsCsv(decisions, out);
  WriteFileAtomically(a.out, out.str());
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Malware spreading on contact networks: generation, simulation and control"};
  app.require_subcommand(1);

  GenerateArgs gen;
  auto* generate = app.add_subcommand("generate", "Generate a network and write its edge list");
  generate->add_option("--preset", gen.preset, "net-a|net-b|net-c|net-d");
  generate->add_option("--family", gen.family, "complete|multimodal|config|powerlaw");
  generate->add_option("--n", gen.n, "Node count");
  generate->add_flag("--directed", gen.directed, "Directed configuration model");
  generate->add_option("--alpha", gen.alpha, "Power-law exponent");
  generate->add_option("--k-min", gen.k_min, "Smallest power-law degree");
  generate->add_option("--k-max", gen.k_max, "Largest power-law degree");
  generate->add_option("--peaks", gen.peaks, "Multimodal peaks 'degree:weight,...'");
  generate->add_option("--histogram", gen.histogram, "Degree-histogram file for the config family");
  generate->add_option("--seed", gen.seed, "RNG seed");
  generate->add_option("--out", gen.out, "Edge-list output")->required();
  generate->add_option("--histogram-out", gen.histogram_out, "Also write the degree histogram");

  SimulateArgs sim;
  auto* simulate = app.add_subcommand("simulate", "Simulate one spreading run");
  simulate->add_option("--graph", sim.graph, "Edge-list file")->required();
  simulate->add_option("--targeting", sim.targeting, "neighbor|scan");
  simulate->add_option("--rate", sim.rate, "Attempts per second per infected host");
  simulate->add_option("--pinfect", sim.pinfect, "Infection probability per delivered contact");
  simulate->add_option("--address-space", sim.address_space, "Scan address space (0 = node count)");
  simulate->add_option("--throttle-rate", sim.throttle_rate, "Throttle releases per second (omit for none)");
  simulate->add_option("--working-set", sim.working_set, "Throttle working-set size");
  simulate->add_option("--throttle-start", sim.throttle_start, "phase|full|empty");
  simulate->add_option("--vaccinate", sim.vaccinate, "random|targeted");
  simulate->add_option("--fraction", sim.fraction, "Vaccinated fraction");
  simulate->add_option("--seed-infected", sim.seed_infected, "Number of initially infected hosts");
  simulate->add_option("--dt", sim.dt, "Tick length in seconds");
  simulate->add_option("--tmax", sim.tmax, "Simulated seconds");
  simulate->add_option("--seed", sim.seed, "RNG seed");
  simulate->add_option("--out", sim.out, "TimeSeries CSV output")->required();

  ThresholdArgs thr;
  auto* threshold = app.add_subcommand("threshold", "Critical vaccination fraction");
  threshold->add_option("--graph", thr.graph, "Edge-list file")->required();
  threshold->add_option("--strategy", thr.strategy, "random|targeted");
  threshold->add_option("--s-min", thr.s_min, "Giant-component cutoff");
  threshold->add_option("--trials", thr.trials, "Monte-Carlo trials");
  threshold->add_option("--seed", thr.seed, "RNG seed");
  threshold->add_option("--method", thr.method, "empirical|analytical|both");
  threshold->add_option("--out", thr.out, "Result CSV")->required();

  ThrottleDemoArgs demo;
  auto* throttle_demo = app.add_subcommand("throttle-demo", "Replay a request trace through a throttle");
  throttle_demo->add_option("--trace", demo.trace, "Trace CSV (t,dest)")->required();
  throttle_demo->add_option("--rate", demo.rate, "Releases per second");
  throttle_demo->add_option("--working-set", demo.working_set, "Working-set size");
  throttle_demo->add_option("--queue-capacity", demo.queue_capacity, "Queue bound (0 = unbounded)");
  throttle_demo->add_option("--out", demo.out, "Decisions CSV")->required();

  std::string config_path;
  std::string experiment_out;
  unsigned threads = 0;
  auto* experiment = app.add_subcommand("experiment", "Run a configured batch of replicates");
  experiment->add_option("--config", config_path, "Experiment config file")->required();
  experiment->add_option("--out", experiment_out, "Output directory (overrides [run] output)");
  experiment->add_option("--threads", threads, "Worker threads (0 = all cores)");

  std::string baseline_dir;
  std::string treated_dir;
  std::string compare_out;
  auto* compare = app.add_subcommand("compare", "Slowdown of a treated experiment against a baseline");
  compare->add_option("--baseline", baseline_dir, "Baseline output directory")->required();
  compare->add_option("--treated", treated_dir, "Treated output directory")->required();
  compare->add_option("--out", compare_out, "Slowdown CSV (default: stdout)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e);
  }

  try {
    if (*generate) RunGenerate(gen);
    if (*simulate) RunSimulate(sim);
    if (*threshold) RunThreshold(thr);
    if (*throttle_demo) RunThrottleDemo(demo);
    if (*experiment) {
      auto cfg = LoadConfig(config_path);
      if (!experiment_out.empty()) cfg.output_dir = experiment_out;
      RunExperiment(cfg, threads);
    }
    if (*compare) {
      const auto rows = Compare(LoadExperimentResult(baseline_dir), LoadExperimentResult(treated_dir));
      const auto csv = SlowdownCsv(rows);
      if (compare_out.empty()) {
        std::cout << csv;
      } else {
        WriteFileAtomically(compare_out, csv);
      }
    }
  } catch (const std::exception& e) {
    std::string msg = e.what();
    for (auto& c : msg) {
      if (c == '\n') c = ' ';
    }
    std::cerr << "contagion: error: " << msg << '\n';
    return 1;
  }
  return 0;
}
