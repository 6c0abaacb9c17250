#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "contagion/degree_distribution.hpp"
#include "contagion/graph.hpp"

namespace contagion {

enum class VaccinationKind { Random, TargetedByDegree };

std::string ToString(VaccinationKind k);
/// Accepts random|targeted.
VaccinationKind ParseVaccinationKind(const std::string& s);

struct VaccinationStrategy {
  VaccinationKind kind = VaccinationKind::Random;
  double fraction = 0.0;  // in [0, 1]
};

/// round(f * n) node ids, ascending. Random samples uniformly without
/// replacement; targeted takes the highest (total) degrees, ties broken by
/// ascending id. Throws std::invalid_argument for f outside [0, 1].
std::vector<NodeId> Vaccinate(const Graph& g, const VaccinationStrategy& strategy,
                              std::uint64_t seed);

/// Nodes in targeted-removal order: degree descending, then id ascending.
std::vector<NodeId> TargetedOrder(const Graph& g);

/// Largest (weakly) connected component of g minus `removed`, as a fraction
/// of the original node count.
double GiantComponentFraction(const Graph& g, std::span<const NodeId> removed);
/// Same, with removal given as a per-node mask.
double GiantComponentFraction(const Graph& g, const std::vector<bool>& removed);

enum class ThresholdMethod { Empirical, Analytical };

std::string ToString(ThresholdMethod m);

struct ThresholdResult {
  VaccinationKind kind = VaccinationKind::Random;
  double f_c = 0.0;
  ThresholdMethod method = ThresholdMethod::Empirical;
  double s_min = 0.0;
  int trials = 0;
  double ci_halfwidth = 0.0;
  /// Set when the mean giant-component curve rose with f by more than the
  /// sampling noise allows.
  bool non_monotone = false;
};

/// Smallest vaccination fraction whose mean residual giant component falls
/// below s_min, located by bisection to max(1/n, 1e-3).
///
/// Random trials use one fixed permutation each, so the removed set grows
/// monotonically with f within a trial. Targeted removal is deterministic and
/// runs a single trial whatever `trials` says. The confidence half-width
/// combines 1.96 standard errors of the per-trial crossing points with half
/// the bisection resolution.
ThresholdResult EmpiricalThreshold(const Graph& g, VaccinationKind kind, double s_min,
                                   int trials, std::uint64_t seed);

/// Generating-function threshold for a configuration-model network with
/// degree probabilities p (indexed by degree).
///
/// A giant component survives while sum_k k(k-1) p_k phi_k > <k>, where
/// phi_k is the fraction of degree-k nodes left unvaccinated and <k> is the
/// mean degree before vaccination. This is the Molloy-Reed condition on the
/// residual network once each survivor's degree is thinned by the edges it
/// lost to vaccinated neighbours. Random vaccination (phi_k = 1 - f) gives
/// f_c = 1 - <k>/(<k^2> - <k>). Targeted vaccination removes whole degree
/// classes from the top and occupies the boundary class fractionally.
ThresholdResult AnalyticalThreshold(std::span<const double> p, VaccinationKind kind);
ThresholdResult AnalyticalThreshold(const DegreeDistribution& d, VaccinationKind kind);

}  // namespace contagion
