#include "contagion/percolation.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>
#include <stdexcept>

#include "contagion/rng.hpp"

namespace contagion {
namespace {

class DisjointSets {
 public:
  explicit DisjointSets(std::size_t n) : parent_(n), size_(n, 1) {
    std::iota(parent_.begin(), parent_.end(), 0);
  }
  std::size_t Find(std::size_t x) {
    while (parent_[x] != x) {
      parent_[x] = parent_[parent_[x]];
      x = parent_[x];
    }
    return x;
  }
  void Union(std::size_t a, std::size_t b) {
    a = Find(a);
    b = Find(b);
    if (a == b) return;
    if (size_[a] < size_[b]) std::swap(a, b);
    parent_[b] = a;
    size_[a] += size_[b];
  }
  std::size_t Size(std::size_t x) { return size_[Find(x)]; }

 private:
  std::vector<std::size_t> parent_;
  std::vector<std::size_t> size_;
};

std::size_t RemovalCount(double f, std::size_t n) {
  return static_cast<std::size_t>(std::llround(f * static_cast<double>(n)));
}

// Giant-component fraction after removing the first round(f n) entries of
// `order`.
double PrefixRemovalFraction(const Graph& g, const std::vector<NodeId>& order, double f,
                             std::vector<bool>& mask) {
  std::fill(mask.begin(), mask.end(), false);
  const std::size_t m = RemovalCount(f, g.num_nodes());
  for (std::size_t i = 0; i < m; ++i) mask[order[i]] = true;
  return GiantComponentFraction(g, mask);
}

}  // namespace

std::string ToString(VaccinationKind k) {
  return k == VaccinationKind::Random ? "random" : "targeted";
}

VaccinationKind ParseVaccinationKind(const std::string& s) {
  if (s == "random") return VaccinationKind::Random;
  if (s == "targeted") return VaccinationKind::TargetedByDegree;
  throw std::invalid_argument("unknown vaccination strategy '" + s + "'");
}

std::string ToString(ThresholdMethod m) {
  return m == ThresholdMethod::Empirical ? "empirical" : "analytical";
}

std::vector<NodeId> TargetedOrder(const Graph& g) {
  std::vector<NodeId> order(g.num_nodes());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](NodeId a, NodeId b) { return g.degree(a) > g.degree(b); });
  return order;
}

std::vector<NodeId> Vaccinate(const Graph& g, const VaccinationStrategy& strategy,
                              std::uint64_t seed) {
  if (!(strategy.fraction >= 0.0 && strategy.fraction <= 1.0)) {
    throw std::invalid_argument("vaccination fraction must lie in [0, 1]");
  }
  const std::size_t n = g.num_nodes();
  const std::size_t m = RemovalCount(strategy.fraction, n);
  std::vector<NodeId> chosen;
  if (strategy.kind == VaccinationKind::TargetedByDegree) {
    auto order = TargetedOrder(g);
    chosen.assign(order.begin(), order.begin() + static_cast<std::ptrdiff_t>(m));
  } else {
    std::vector<NodeId> ids(n);
    std::iota(ids.begin(), ids.end(), 0);
    Rng rng = MakeRng(seed);
    // Partial Fisher-Yates.
    for (std::size_t i = 0; i < m; ++i) {
      std::uniform_int_distribution<std::size_t> pick(i, n - 1);
      std::swap(ids[i], ids[pick(rng)]);
    }
    chosen.assign(ids.begin(), ids.begin() + static_cast<std::ptrdiff_t>(m));
  }
  std::sort(chosen.begin(), chosen.end());
  return chosen;
}

double GiantComponentFraction(const Graph& g, const std::vector<bool>& removed) {
  const std::size_t n = g.num_nodes();
  if (n == 0) return 0.0;
  DisjointSets sets(n);
  for (const auto& [u, v] : g.edges()) {
    if (!removed[u] && !removed[v]) sets.Union(u, v);
  }
  std::size_t best = 0;
  for (std::size_t u = 0; u < n; ++u) {
    if (!removed[u]) best = std::max(best, sets.Size(u));
  }
  return static_cast<double>(best) / static_cast<double>(n);
}

double GiantComponentFraction(const Graph& g, std::span<const NodeId> removed) {
  std::vector<bool> mask(g.num_nodes(), false);
  for (NodeId u : removed) mask.at(static_cast<std::size_t>(u)) = true;
  return GiantComponentFraction(g, mask);
}

ThresholdResult EmpiricalThreshold(const Graph& g, VaccinationKind kind, double s_min,
                                   int trials, std::uint64_t seed) {
  if (!(s_min > 0.0 && s_min < 1.0)) throw std::invalid_argument("s_min must lie in (0, 1)");
  if (trials < 1) throw std::invalid_argument("trials must be at least 1");
  const std::size_t n = g.num_nodes();
  if (kind == VaccinationKind::TargetedByDegree) trials = 1;

  std::vector<std::vector<NodeId>> orders;
  if (kind == VaccinationKind::TargetedByDegree) {
    orders.push_back(TargetedOrder(g));
  } else {
    for (int t = 0; t < trials; ++t) {
      std::vector<NodeId> order(n);
      std::iota(order.begin(), order.end(), 0);
      Rng rng = MakeRng(DeriveSeed(seed, static_cast<std::uint64_t>(t)));
      std::shuffle(order.begin(), order.end(), rng);
      orders.push_back(std::move(order));
    }
  }

  std::vector<bool> mask(n);
  // Per-trial values at one f; reduced in trial order.
  auto evaluate = [&](double f) {
    std::vector<double> values;
    values.reserve(orders.size());
    for (const auto& order : orders) values.push_back(PrefixRemovalFraction(g, order, f, mask));
    return values;
  };
  auto mean = [](const std::vector<double>& v) {
    return std::accumulate(v.begin(), v.end(), 0.0) / static_cast<double>(v.size());
  };

  const double resolution = std::max(n > 0 ? 1.0 / static_cast<double>(n) : 1.0, 1e-3);
  // Smallest f in [0, 1] with curve(f) < s_min; curve(1) is always 0.
  auto bisect = [&](auto&& curve) {
    if (curve(0.0) < s_min) return 0.0;
    double lo = 0.0;
    double hi = 1.0;
    while (hi - lo > resolution) {
      const double mid = 0.5 * (lo + hi);
      (curve(mid) < s_min ? hi : lo) = mid;
    }
    return hi;
  };

  ThresholdResult result;
  result.kind = kind;
  result.method = ThresholdMethod::Empirical;
  result.s_min = s_min;
  result.trials = trials;
  result.f_c = bisect([&](double f) { return mean(evaluate(f)); });

  double stat_half = 0.0;
  if (orders.size() > 1) {
    std::vector<double> crossings;
    for (const auto& order : orders) {
      crossings.push_back(bisect([&](double f) { return PrefixRemovalFraction(g, order, f, mask); }));
    }
    const double mu = mean(crossings);
    double ss = 0.0;
    for (double c : crossings) ss += (c - mu) * (c - mu);
    const double sd = std::sqrt(ss / static_cast<double>(crossings.size() - 1));
    stat_half = 1.96 * sd / std::sqrt(static_cast<double>(crossings.size()));
  }
  result.ci_halfwidth = stat_half + 0.5 * resolution;

  // Coarse scan of the mean curve for rises beyond noise.
  auto standard_error = [&](const std::vector<double>& v) {
    if (v.size() < 2) return 0.0;
    const double mu = mean(v);
    double ss = 0.0;
    for (double x : v) ss += (x - mu) * (x - mu);
    return std::sqrt(ss / static_cast<double>(v.size() - 1) / static_cast<double>(v.size()));
  };
  constexpr int kGrid = 20;
  const double granularity = 1.0 / static_cast<double>(std::max<std::size_t>(n, 1));
  auto prev = evaluate(0.0);
  for (int i = 1; i <= kGrid; ++i) {
    auto cur = evaluate(static_cast<double>(i) / kGrid);
    const double noise = 3.0 * std::max(standard_error(prev), standard_error(cur));
    if (mean(cur) > mean(prev) + granularity + noise) result.non_monotone = true;
    prev = std::move(cur);
  }
  return result;
}

ThresholdResult AnalyticalThreshold(std::span<const double> p, VaccinationKind kind) {
  ThresholdResult result;
  result.kind = kind;
  result.method = ThresholdMethod::Analytical;

  double mean_k = 0.0;
  double excess = 0.0;  // sum k(k-1) p_k
  for (std::size_t k = 0; k < p.size(); ++k) {
    const double kd = static_cast<double>(k);
    mean_k += kd * p[k];
    excess += kd * (kd - 1.0) * p[k];
  }
  if (!(mean_k > 0.0)) throw std::invalid_argument("degree distribution has zero mean");
  // No giant component even without vaccination.
  if (excess <= mean_k) {
    result.f_c = 0.0;
    return result;
  }

  if (kind == VaccinationKind::Random) {
    result.f_c = std::clamp(1.0 - mean_k / excess, 0.0, 1.0);
    return result;
  }

  double kept_excess = excess;
  double removed = 0.0;
  for (std::size_t k = p.size(); k-- > 0;) {
    const double kd = static_cast<double>(k);
    const double cls = kd * (kd - 1.0) * p[k];
    if (kept_excess - cls <= mean_k) {
      // Keep just enough of class k to sit exactly at the threshold.
      const double keep = cls > 0.0 ? (mean_k - (kept_excess - cls)) / cls : 1.0;
      result.f_c = std::clamp(removed + (1.0 - keep) * p[k], 0.0, 1.0);
      return result;
    }
    kept_excess -= cls;
    removed += p[k];
  }
  result.f_c = 1.0;
  return result;
}

ThresholdResult AnalyticalThreshold(const DegreeDistribution& d, VaccinationKind kind) {
  const auto p = d.probabilities();
  return AnalyticalThreshold(std::span<const double>(p), kind);
}

}  // namespace contagion
