#include "contagion/presets.hpp"

#include <cmath>
#include <numeric>

#include "contagion/error.hpp"

namespace contagion {
namespace {

constexpr std::size_t kLargePresetNodes = 10'000;

}  // namespace

std::vector<std::string> PresetNames() { return {"net-a", "net-b", "net-c", "net-d"}; }

std::vector<double> PowerLawWithCutoff(double exponent, double cutoff, int k_min, int k_max) {
  std::vector<double> p(static_cast<std::size_t>(k_max) + 1, 0.0);
  for (int k = k_min; k <= k_max; ++k) {
    const double kd = static_cast<double>(k);
    p[k] = std::pow(kd, -exponent) * std::exp(-kd / cutoff);
  }
  return p;
}

std::vector<double> DiscretizedLogNormal(double mu, double sigma, int k_min, int k_max) {
  auto cdf = [&](double x) {
    if (x <= 0.0) return 0.0;
    return 0.5 * std::erfc(-(std::log(x) - mu) / (sigma * std::sqrt(2.0)));
  };
  std::vector<double> p(static_cast<std::size_t>(k_max) + 1, 0.0);
  for (int k = k_min; k <= k_max; ++k) p[k] = cdf(k + 0.5) - cdf(k - 0.5);
  return p;
}

NetworkSpec Preset(const std::string& name, std::uint64_t seed) {
  NetworkSpec spec;
  spec.seed = seed;
  if (name == "net-a") {
    spec.family = Family::Complete;
    spec.n = 1000;
  } else if (name == "net-b") {
    spec.family = Family::MultiModal;
    spec.n = 382;
    spec.peaks = {{8, 0.4}, {40, 0.3}, {120, 0.2}, {250, 0.1}};
  } else if (name == "net-c") {
    spec.family = Family::ConfigModel;
    spec.n = kLargePresetNodes;
    spec.directed = true;
    // Out-degrees: 40% empty address books, the rest a power law with cutoff.
    auto p = PowerLawWithCutoff(2.0, 200.0, 1, 999);
    const double tail = std::accumulate(p.begin(), p.end(), 0.0);
    for (auto& x : p) x *= 0.6 / tail;
    p[0] = 0.4;
    spec.distribution = DegreeDistribution::FromProbabilities(p, static_cast<std::int64_t>(spec.n));
  } else if (name == "net-d") {
    spec.family = Family::ConfigModel;
    spec.n = kLargePresetNodes;
    const auto p = DiscretizedLogNormal(3.4, 0.35, 1, 999);
    spec.distribution = DegreeDistribution::FromProbabilities(p, static_cast<std::int64_t>(spec.n));
  } else {
    throw ConfigError("unknown preset '" + name + "' (expected net-a|net-b|net-c|net-d)");
  }
  return spec;
}

}  // namespace contagion
