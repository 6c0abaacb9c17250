#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>

#include "contagion/epidemic.hpp"
#include "contagion/generators.hpp"
#include "contagion/percolation.hpp"
#include "contagion/throttle.hpp"

namespace contagion {

// Experiment files are flat `key = value` lines grouped under [sections]:
//
//   [network]   preset = net-a | file = graph.txt | family = ... (+ n, directed,
//               alpha, k_min, k_max, peaks = "3:0.5, 9:0.5", degrees = "1 2 3",
//               histogram = hist.txt), seed
//   [worm]      targeting (required), rate (required), pinfect, address_space
//   [controls]  vaccinate = none|random|targeted, fraction,
//               throttle_rate, working_set, queue_capacity, throttle_start
//   [run]       replicates, dt, t_max, seed, seed_infected, target_fraction,
//               stop_fraction, output
//
// Relative paths resolve against the config file's directory. A throttle is
// enabled by giving throttle_rate. Vaccination is applied before throttles.

struct ExperimentConfig {
  // Exactly one network source is set.
  std::optional<std::string> preset;
  std::optional<std::filesystem::path> graph_file;
  std::optional<NetworkSpec> network;
  /// Seed for network generation; defaults to one derived from the run seed.
  std::optional<std::uint64_t> network_seed;

  WormBehavior worm;

  std::optional<VaccinationStrategy> vaccination;
  std::optional<ThrottleConfig> throttle;
  ThrottleStart throttle_start = ThrottleStart::RandomPhase;

  int replicates = 1;
  double dt = 0.1;
  double t_max = 3600.0;
  std::uint64_t seed = 1;
  int seed_infected = 1;
  double target_fraction = 0.95;
  std::optional<double> stop_fraction;
  std::filesystem::path output_dir = "out";

  /// Every setting, defaults included, in loadable form.
  std::string Resolved() const;
  /// Canonical descriptions used to check that two runs are comparable.
  std::string NetworkKey() const;
  std::string WormKey() const;
  std::string ControlsKey() const;
  std::uint64_t EffectiveNetworkSeed() const;
};

/// Throws ConfigError naming the key and line on unknown keys, malformed
/// values, missing required keys, or referenced files that do not exist.
ExperimentConfig ParseConfig(std::istream& in, const std::string& source,
                             const std::filesystem::path& base_dir);
ExperimentConfig LoadConfig(const std::filesystem::path& path);

}  // namespace contagion
