// Acceptance suite. Prints one PASS/FAIL line per criterion plus indented
// info lines. Exit status is nonzero if any selected criterion fails.
//
//   acceptance            run every criterion
//   acceptance -c 3       run a single criterion

#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <map>
#include <random>
#include <set>
#include <sstream>

#include <fmt/format.h>

#include "CLI11.hpp"
#include "contagion/config.hpp"
#include "contagion/degree_distribution.hpp"
#include "contagion/epidemic.hpp"
#include "contagion/experiment.hpp"
#include "contagion/generators.hpp"
#include "contagion/percolation.hpp"
#include "contagion/rng.hpp"
#include "contagion/throttle.hpp"
#include "contagion/throttle_trace.hpp"

namespace fs = std::filesystem;
using namespace contagion;

namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
  std::vector<std::string> info;
};

class Stopwatch {
 public:
  double seconds() const {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
  }

 private:
  std::chrono::steady_clock::time_point start_ = std::chrono::steady_clock::now();
};

fs::path ScratchDir(const std::string& name) {
  const auto dir = fs::temp_directory_path() / "contagion_acceptance" / name;
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

std::map<std::string, std::string> ReadTree(const fs::path& root) {
  std::map<std::string, std::string> files;
  for (const auto& entry : fs::recursive_directory_iterator(root)) {
    if (!entry.is_regular_file()) continue;
    std::ifstream in(entry.path(), std::ios::binary);
    std::stringstream ss;
    ss << in.rdbuf();
    files[fs::relative(entry.path(), root).string()] = ss.str();
  }
  return files;
}

// 1. Throttle slowdown on net-a.
ExperimentConfig SlowdownConfig(std::optional<ThrottleConfig> throttle, ThrottleStart start) {
  ExperimentConfig cfg;
  cfg.preset = "net-a";
  cfg.worm.targeting = Targeting::RandomScan;
  cfg.worm.attempt_rate = 400.0;
  cfg.worm.infection_probability = 1.0;
  cfg.worm.address_space = 0;  // = n
  cfg.throttle = throttle;
  cfg.throttle_start = start;
  cfg.replicates = 10;
  cfg.dt = 1e-4;
  cfg.t_max = 120.0;
  cfg.seed = 1;
  cfg.seed_infected = 1;
  // The growth window ends at n/2; nothing past that is needed.
  cfg.stop_fraction = 0.6;
  return cfg;
}

std::optional<double> GrowthSlowdown(ThrottleStart start, double* base_rate, double* treated_rate) {
  auto base_cfg = SlowdownConfig(std::nullopt, start);
  base_cfg.output_dir = ScratchDir("slowdown_base");
  auto treated_cfg = SlowdownConfig(ThrottleConfig{1.0, 4, {}}, start);
  treated_cfg.output_dir = ScratchDir("slowdown_treated_" + ToString(start));
  const auto rows = Compare(RunExperiment(base_cfg), RunExperiment(treated_cfg));
  for (const auto& row : rows) {
    if (row.metric != "growth_rate") continue;
    if (row.baseline) *base_rate = *row.baseline;
    if (row.treated) *treated_rate = *row.treated;
    return row.slowdown;
  }
  return std::nullopt;
}

Outcome ThrottleSlowdown() {
  Outcome o;
  Stopwatch clock;
  double base = 0.0, treated = 0.0;
  const auto factor = GrowthSlowdown(ThrottleStart::RandomPhase, &base, &treated);
  const double elapsed = clock.seconds();
  o.pass = factor && *factor >= 250.0 && *factor <= 550.0 && elapsed < 120.0;
  o.detail = fmt::format("slowdown={:.1f} (target [250, 550]); growth base={:.4g}/s throttled={:.4g}/s; "
                         "runtime {:.1f}s (limit 120s)",
                         factor.value_or(NAN), base, treated, elapsed);
  double full_base = 0.0, full_treated = 0.0;
  const auto full = GrowthSlowdown(ThrottleStart::Full, &full_base, &full_treated);
  o.info.push_back(fmt::format("throttles armed with a full token on infection: slowdown={:.1f}",
                               full.value_or(NAN)));
  return o;
}

// 2. Legitimate-traffic transparency. Every 10th event goes to a fresh
// destination (0.5/s at 5 events/s); the rest pick one of 3 repeat
// destinations uniformly at random.
std::vector<TraceEvent> LegitimateTrace(bool round_robin) {
  const int events = 10000;
  const double spacing = 0.2;
  std::mt19937_64 rng(DeriveSeed(2, 0));
  std::uniform_int_distribution<Address> repeat(0, 2);
  std::vector<TraceEvent> trace;
  Address next_novel = 1000;
  Address cycle = 0;
  for (int i = 0; i < events; ++i) {
    Address dest;
    if (i % 10 == 9) {
      dest = next_novel++;
    } else {
      dest = round_robin ? cycle++ % 3 : repeat(rng);
    }
    trace.push_back({i * spacing, dest});
  }
  return trace;
}

struct ZeroDelayShare {
  double share = 0.0;
  std::size_t counted = 0;
  std::size_t drops = 0;
};

// Requests issued after the first w are counted; zero delay means admitted
// or released at the instant of the request.
ZeroDelayShare MeasureTransparency(const std::vector<TraceEvent>& trace, const ThrottleConfig& cfg) {
  const auto decisions = ReplayTrace(trace, cfg);
  const double warmup_end = trace[cfg.working_set_capacity].t;
  ZeroDelayShare z;
  std::size_t zero = 0;
  for (const auto& d : decisions) {
    z.drops += d.kind == DecisionKind::Drop;
    if (d.t - d.delay < warmup_end) continue;
    ++z.counted;
    if (d.kind != DecisionKind::Drop && d.delay == 0.0) ++zero;
  }
  z.share = static_cast<double>(zero) / static_cast<double>(z.counted);
  return z;
}

Outcome Transparency() {
  Outcome o;
  const ThrottleConfig defaults{};
  const auto z = MeasureTransparency(LegitimateTrace(false), defaults);
  o.pass = z.drops == 0 && z.share >= 0.99;
  o.detail = fmt::format("{:.4f} of {} post-warm-up requests had zero delay (target >= 0.99); "
                         "rate={}/s working_set={}",
                         z.share, z.counted, defaults.rate, defaults.working_set_capacity);
  const auto rr = MeasureTransparency(LegitimateTrace(true), defaults);
  o.info.push_back(fmt::format("round-robin repeats, working_set={}: {:.4f}", defaults.working_set_capacity,
                               rr.share));
  ThrottleConfig wider = defaults;
  wider.working_set_capacity = 5;
  o.info.push_back(fmt::format("uniform repeats, working_set=5: {:.4f}",
                               MeasureTransparency(LegitimateTrace(false), wider).share));
  return o;
}

// 3. Targeted vs random vaccination on a heavy-tailed configuration model.
Outcome TargetedVsRandom() {
  Outcome o;
  Stopwatch clock;
  NetworkSpec spec;
  spec.family = Family::PowerLaw;
  spec.n = 10000;
  spec.alpha = 2.5;
  spec.k_min = 1;
  spec.k_max = 100;
  spec.seed = 3;
  const Graph g = Generate(spec);
  const auto targeted = EmpiricalThreshold(g, VaccinationKind::TargetedByDegree, 0.01, 1, 31);
  const auto random = EmpiricalThreshold(g, VaccinationKind::Random, 0.01, 10, 32);
  const double elapsed = clock.seconds();
  const bool targeted_ok = targeted.f_c <= 0.15;
  const bool random_ok = random.f_c >= 0.9;
  o.pass = targeted_ok && random_ok && elapsed < 300.0;
  o.detail = fmt::format("f_c(targeted)={:.4f} (target <= 0.15, {}); f_c(random)={:.4f} +/- {:.4f} "
                         "(target >= 0.9, {}); runtime {:.1f}s (limit 300s)",
                         targeted.f_c, targeted_ok ? "met" : "missed", random.f_c, random.ci_halfwidth,
                         random_ok ? "met" : "missed", elapsed);
  const auto d = ComputeDegreeDistribution(g);
  o.info.push_back(fmt::format("analytic on the realized degrees: targeted={:.4f} random={:.4f}",
                               AnalyticalThreshold(d, VaccinationKind::TargetedByDegree).f_c,
                               AnalyticalThreshold(d, VaccinationKind::Random).f_c));
  for (double f : {0.7, 0.8, 0.9}) {
    double mean = 0.0;
    for (std::uint64_t s = 0; s < 10; ++s) {
      mean += GiantComponentFraction(g, Vaccinate(g, {VaccinationKind::Random, f}, 500 + s));
    }
    o.info.push_back(fmt::format("mean giant component after random vaccination f={:.1f}: {:.4f}", f, mean / 10));
  }
  return o;
}

// 4. Analytic vs empirical random thresholds.
Outcome PercolationAgreement() {
  Outcome o;
  const std::size_t n = 10000;
  const int trials = 20;
  // Largest critical clusters scale as n^(2/3), so the finite-size cutoff is n^(-1/3).
  const double s_min = std::pow(static_cast<double>(n), -1.0 / 3.0);
  std::vector<int> cubic(n, 3);
  std::vector<int> mixture(n / 2, 2);
  mixture.insert(mixture.end(), n / 2, 6);
  bool all = true;
  std::string detail;
  const std::vector<std::pair<std::string, std::vector<int>>> cases{{"3-regular", cubic},
                                                                    {"{2,6} mixture", mixture}};
  for (std::size_t i = 0; i < cases.size(); ++i) {
    const auto& [name, degrees] = cases[i];
    const Graph g = BuildConfigurationModel(degrees, false, 40 + i);
    const double analytic =
        AnalyticalThreshold(DegreeDistribution::FromSequence(degrees), VaccinationKind::Random).f_c;
    const auto empirical = EmpiricalThreshold(g, VaccinationKind::Random, s_min, trials, 50 + i);
    const double gap = std::abs(empirical.f_c - analytic);
    all = all && gap <= 0.05;
    detail += fmt::format("{}{}: analytic={:.4f} empirical={:.4f} |diff|={:.4f}", detail.empty() ? "" : "; ",
                          name, analytic, empirical.f_c, gap);
    const auto at_default = EmpiricalThreshold(g, VaccinationKind::Random, 0.01, trials, 50 + i);
    o.info.push_back(fmt::format("{} with s_min=0.01: empirical={:.4f} |diff|={:.4f}", name, at_default.f_c,
                                 std::abs(at_default.f_c - analytic)));
  }
  o.pass = all;
  o.detail = detail + fmt::format(" (tolerance 0.05, s_min={:.4f}, trials={})", s_min, trials);
  return o;
}

// 5. Configuration-model exactness.
Outcome GeneratorExactness() {
  Outcome o;
  std::mt19937_64 rng(5);
  int exact = 0, simple = 0, directed_specs = 0;
  const int specs = 100;
  for (int i = 0; i < specs; ++i) {
    NetworkSpec spec;
    spec.family = Family::ConfigModel;
    spec.n = std::uniform_int_distribution<std::size_t>(50, 3000)(rng);
    spec.directed = i % 4 == 3;
    spec.seed = rng();
    const int k_max = std::max(2, static_cast<int>(std::sqrt(static_cast<double>(spec.n))));
    std::vector<int> degrees;
    switch (i % 3) {
      case 0:
        degrees = SamplePowerLawDegrees(spec.n, 2.0 + (i % 7) * 0.2, 1, k_max, rng());
        break;
      case 1: {
        std::uniform_int_distribution<int> uniform(0, k_max);
        for (std::size_t u = 0; u < spec.n; ++u) degrees.push_back(uniform(rng));
        break;
      }
      default: {
        const std::vector<Peak> peaks{{1, 0.3}, {k_max / 2, 0.5}, {k_max, 0.2}};
        degrees = SampleMultimodalDegrees(spec.n, peaks, rng());
      }
    }
    long long sum = 0;
    for (int k : degrees) sum += k;
    if (!spec.directed && sum % 2 != 0) degrees[0] += degrees[0] < k_max ? 1 : -1;
    spec.degrees = degrees;
    directed_specs += spec.directed;
    const Graph g = Generate(spec);

    std::vector<int> out(spec.n, 0), in(spec.n, 0);
    std::set<Edge> seen;
    bool ok_simple = true;
    for (auto e : g.edges()) {
      ++out[e.first];
      ++in[e.second];
      ok_simple = ok_simple && e.first != e.second;
      if (!spec.directed && e.first > e.second) std::swap(e.first, e.second);
      ok_simple = ok_simple && seen.insert(e).second;
    }
    bool ok_exact;
    if (spec.directed) {
      std::vector<int> in_sorted = in, want = degrees;
      std::sort(in_sorted.begin(), in_sorted.end());
      std::sort(want.begin(), want.end());
      ok_exact = out == degrees && in_sorted == want;
    } else {
      std::vector<int> total(spec.n);
      for (std::size_t u = 0; u < spec.n; ++u) total[u] = out[u] + in[u];
      ok_exact = total == degrees;
    }
    exact += ok_exact;
    simple += ok_simple;
  }
  o.pass = exact == specs && simple == specs;
  o.detail = fmt::format("{}/{} exact degree sequences, {}/{} simple graphs ({} directed specs)", exact,
                         specs, simple, specs, directed_specs);
  return o;
}

// 6. Byte-identical output trees.
Outcome Determinism() {
  Outcome o;
  ExperimentConfig cfg;
  cfg.preset = "net-b";
  cfg.worm.targeting = Targeting::NeighborList;
  cfg.worm.attempt_rate = 50.0;
  cfg.worm.infection_probability = 0.8;
  cfg.vaccination = VaccinationStrategy{VaccinationKind::Random, 0.05};
  cfg.throttle = ThrottleConfig{1.0, 4, {}};
  cfg.replicates = 4;
  cfg.dt = 0.05;
  cfg.t_max = 120.0;
  cfg.seed = 20;
  cfg.seed_infected = 2;
  const auto a = ScratchDir("determinism_a");
  const auto b = ScratchDir("determinism_b");
  cfg.output_dir = a;
  RunExperiment(cfg, 1);
  cfg.output_dir = b;
  RunExperiment(cfg, 4);
  const auto tree_a = ReadTree(a);
  const auto tree_b = ReadTree(b);
  std::size_t bytes = 0;
  for (const auto& [name, contents] : tree_a) bytes += contents.size();
  o.pass = !tree_a.empty() && tree_a == tree_b;
  o.detail = fmt::format("{} files, {} bytes; trees {} (1 vs 4 worker threads)", tree_a.size(), bytes,
                         tree_a == tree_b ? "identical" : "differ");
  return o;
}

// 7. Golden throttle trace.
Outcome GoldenTrace() {
  Outcome o;
  const double dt = 0.1;
  Throttle th(ThrottleConfig{1.0, 4, {}});
  for (Address d = 1; d <= 5; ++d) th.request(d, 0.0);
  std::vector<double> times;
  for (int step = 0; step <= 100; ++step) {
    for (const auto& r : th.tick(step * dt)) times.push_back(r.released_at);
  }
  bool ok = times.size() == 5;
  std::string list;
  for (std::size_t i = 0; i < times.size(); ++i) {
    ok = ok && std::abs(times[i] - static_cast<double>(i)) <= dt + 1e-12;
    list += fmt::format("{}{:.1f}", i ? "," : "", times[i]);
  }
  o.pass = ok;
  o.detail = fmt::format("releases at t=[{}] (expected 0,1,2,3,4 +/- {})", list, dt);
  return o;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"acceptance suite"};
  int only = 0;
  app.add_option("-c,--criterion", only, "Run a single criterion (1-7)")->check(CLI::Range(1, 7));
  CLI11_PARSE(app, argc, argv);

  const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria{
      {"throttle slowdown on net-a", ThrottleSlowdown},
      {"legitimate-traffic transparency", Transparency},
      {"targeted vs random vaccination on heavy tails", TargetedVsRandom},
      {"analytic vs empirical percolation thresholds", PercolationAgreement},
      {"configuration-model exactness", GeneratorExactness},
      {"byte-identical output trees", Determinism},
      {"golden throttle trace", GoldenTrace},
  };
  int failures = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    if (only != 0 && static_cast<std::size_t>(only) != i + 1) continue;
    Outcome o;
    try {
      o = criteria[i].second();
    } catch (const std::exception& e) {
      o.pass = false;
      o.detail = std::string("exception: ") + e.what();
    }
    failures += !o.pass;
    std::cout << fmt::format("[{}] AC{} {}: {}\n", o.pass ? "PASS" : "FAIL", i + 1, criteria[i].first, o.detail);
    for (const auto& line : o.info) std::cout << "       info: " << line << '\n';
    std::cout.flush();
  }
  return failures == 0 ? 0 : 1;
}
