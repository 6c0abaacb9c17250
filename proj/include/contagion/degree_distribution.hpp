#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <vector>

#include "contagion/graph.hpp"

namespace contagion {

/// Histogram of node degrees: counts[k] nodes have degree k.
///
/// Zero-count bins are never stored. The fraction p_k = counts[k] / n is
/// derived on demand. `alpha` records the power-law exponent when the
/// histogram came from the power-law sampler.
class DegreeDistribution {
 public:
  DegreeDistribution() = default;
  /// Throws std::invalid_argument on negative degrees or counts.
  explicit DegreeDistribution(std::map<std::int64_t, std::int64_t> counts,
                              std::optional<double> alpha = std::nullopt);

  /// Integer histogram over n nodes closest to probabilities p (indexed by
  /// degree), using largest-remainder rounding so the counts sum to n.
  static DegreeDistribution FromProbabilities(std::span<const double> p, std::int64_t n);

  static DegreeDistribution FromSequence(std::span<const int> degrees,
                                         std::optional<double> alpha = std::nullopt);

  const std::map<std::int64_t, std::int64_t>& counts() const { return counts_; }
  std::int64_t num_nodes() const { return n_; }
  std::optional<double> alpha() const { return alpha_; }

  std::int64_t count(std::int64_t k) const;
  double fraction(std::int64_t k) const;
  std::int64_t max_degree() const;
  double mean() const;
  double second_moment() const;

  /// Dense p_k vector indexed by degree, length max_degree() + 1.
  std::vector<double> probabilities() const;
  /// Degree sequence with counts[k] copies of k, ascending.
  std::vector<int> expand() const;

  friend bool operator==(const DegreeDistribution& a, const DegreeDistribution& b) {
    return a.counts_ == b.counts_;
  }

 private:
  std::map<std::int64_t, std::int64_t> counts_;
  std::int64_t n_ = 0;
  std::optional<double> alpha_;
};

enum class DegreeKind { Total, In, Out };

/// Degree histogram of a graph. `kind` only matters for directed graphs;
/// undirected graphs always report the plain degree.
DegreeDistribution ComputeDegreeDistribution(const Graph& g,
                                             DegreeKind kind = DegreeKind::Total);

/// Complementary cumulative distribution: entry k holds the fraction of nodes
/// with degree >= k, for k = 0..max_degree+1. Entry 0 is 1 for non-empty
/// histograms and the last entry is 0.
std::vector<double> CumulativeDistribution(const DegreeDistribution& d);

}  // namespace contagion
