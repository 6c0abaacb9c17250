#include "contagion/degree_distribution.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <utility>
#include <string>

namespace contagion {

DegreeDistribution::DegreeDistribution(std::map<std::int64_t, std::int64_t> counts,
                                       std::optional<double> alpha)
    : alpha_(alpha) {
  for (const auto& [k, c] : counts) {
    if (k < 0) throw std::invalid_argument("negative degree " + std::to_string(k));
    if (c < 0) throw std::invalid_argument("negative count for degree " + std::to_string(k));
    if (c == 0) continue;
    counts_.emplace(k, c);
    n_ += c;
  }
}

DegreeDistribution DegreeDistribution::FromProbabilities(std::span<const double> p,
                                                         std::int64_t n) {
  double total = 0.0;
  for (double x : p) {
    if (!(x >= 0.0)) throw std::invalid_argument("probabilities must be non-negative");
    total += x;
  }
  if (!(total > 0.0)) throw std::invalid_argument("probabilities sum to zero");
  std::vector<std::int64_t> counts(p.size());
  std::vector<std::pair<double, std::size_t>> remainders;
  std::int64_t assigned = 0;
  for (std::size_t k = 0; k < p.size(); ++k) {
    const double exact = p[k] / total * static_cast<double>(n);
    counts[k] = static_cast<std::int64_t>(std::floor(exact));
    assigned += counts[k];
    remainders.emplace_back(exact - static_cast<double>(counts[k]), k);
  }
  // Larger remainder first; lower degree wins ties.
  std::sort(remainders.begin(), remainders.end(),
            [](const auto& a, const auto& b) { return a.first != b.first ? a.first > b.first : a.second < b.second; });
  for (std::size_t i = 0; assigned < n; ++i, ++assigned) ++counts[remainders[i].second];
  std::map<std::int64_t, std::int64_t> hist;
  for (std::size_t k = 0; k < counts.size(); ++k) {
    if (counts[k] > 0) hist.emplace(static_cast<std::int64_t>(k), counts[k]);
  }
  return DegreeDistribution(std::move(hist));
}

DegreeDistribution DegreeDistribution::FromSequence(std::span<const int> degrees,
                                                    std::optional<double> alpha) {
  std::map<std::int64_t, std::int64_t> counts;
  for (int k : degrees) ++counts[k];
  return DegreeDistribution(std::move(counts), alpha);
}

std::int64_t DegreeDistribution::count(std::int64_t k) const {
  const auto it = counts_.find(k);
  return it == counts_.end() ? 0 : it->second;
}

double DegreeDistribution::fraction(std::int64_t k) const {
  return n_ == 0 ? 0.0 : static_cast<double>(count(k)) / static_cast<double>(n_);
}

std::int64_t DegreeDistribution::max_degree() const {
  return counts_.empty() ? 0 : counts_.rbegin()->first;
}

double DegreeDistribution::mean() const {
  if (n_ == 0) return 0.0;
  double s = 0.0;
  for (const auto& [k, c] : counts_) s += static_cast<double>(k) * static_cast<double>(c);
  return s / static_cast<double>(n_);
}

double DegreeDistribution::second_moment() const {
  if (n_ == 0) return 0.0;
  double s = 0.0;
  for (const auto& [k, c] : counts_) {
    const double kd = static_cast<double>(k);
    s += kd * kd * static_cast<double>(c);
  }
  return s / static_cast<double>(n_);
}

std::vector<double> DegreeDistribution::probabilities() const {
  std::vector<double> p(static_cast<std::size_t>(max_degree()) + 1, 0.0);
  if (n_ == 0) return p;
  for (const auto& [k, c] : counts_) {
    p[static_cast<std::size_t>(k)] = static_cast<double>(c) / static_cast<double>(n_);
  }
  return p;
}

std::vector<int> DegreeDistribution::expand() const {
  std::vector<int> seq;
  seq.reserve(static_cast<std::size_t>(n_));
  for (const auto& [k, c] : counts_) seq.insert(seq.end(), static_cast<std::size_t>(c), static_cast<int>(k));
  return seq;
}

DegreeDistribution ComputeDegreeDistribution(const Graph& g, DegreeKind kind) {
  std::map<std::int64_t, std::int64_t> counts;
  for (std::size_t i = 0; i < g.num_nodes(); ++i) {
    const auto u = static_cast<NodeId>(i);
    std::size_t k = 0;
    switch (kind) {
      case DegreeKind::Total: k = g.degree(u); break;
      case DegreeKind::In: k = g.in_degree(u); break;
      case DegreeKind::Out: k = g.out_degree(u); break;
    }
    ++counts[static_cast<std::int64_t>(k)];
  }
  return DegreeDistribution(std::move(counts));
}

std::vector<double> CumulativeDistribution(const DegreeDistribution& d) {
  const auto kmax = static_cast<std::size_t>(d.max_degree());
  std::vector<double> ccdf(kmax + 2, 0.0);
  if (d.num_nodes() == 0) return ccdf;
  // Accumulate integer counts from the top so that differences of adjacent
  // entries reproduce p_k without drift.
  std::int64_t tail = 0;
  const double n = static_cast<double>(d.num_nodes());
  for (std::size_t k = kmax + 1; k-- > 0;) {
    tail += d.count(static_cast<std::int64_t>(k));
    ccdf[k] = static_cast<double>(tail) / n;
  }
  return ccdf;
}

}  // namespace contagion
