#pragma once

#include <string>
#include <vector>

#include "contagion/generators.hpp"

namespace contagion {

// Synthetic stand-ins for four contact-network families. None of them is
// fitted to measured data; peak positions and tail shapes are illustrative.
//
//   net-a  IP reachability: complete graph, n = 1000.
//   net-b  shared admin accounts: 382 machines, four degree peaks.
//   net-c  address books: directed configuration model, n = 10^4, out-degrees
//          from a power law with exponential cutoff (k^-1.7 e^{-k/80}).
//   net-d  email traffic: undirected configuration model, n = 10^4,
//          discretized log-normal degrees (median ~30), moderately long tail.

std::vector<std::string> PresetNames();

/// Throws ConfigError for unknown names.
NetworkSpec Preset(const std::string& name, std::uint64_t seed = 0);

/// Degree probabilities proportional to k^-exponent * exp(-k / cutoff) on
/// [k_min, k_max].
std::vector<double> PowerLawWithCutoff(double exponent, double cutoff, int k_min, int k_max);

/// Log-normal mass on integer bins [k - 1/2, k + 1/2), restricted to
/// [k_min, k_max] and renormalized.
std::vector<double> DiscretizedLogNormal(double mu, double sigma, int k_min, int k_max);

}  // namespace contagion
