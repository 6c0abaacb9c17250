#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "contagion/degree_distribution.hpp"
#include "contagion/graph.hpp"

namespace contagion {

enum class Family { Complete, MultiModal, ConfigModel, PowerLaw };

std::string ToString(Family f);
/// Accepts complete|multimodal|config|powerlaw.
Family ParseFamily(const std::string& s);

struct Peak {
  int degree = 0;
  double weight = 0.0;
};

/// Declarative description of one network instance.
struct NetworkSpec {
  Family family = Family::Complete;
  std::size_t n = 0;
  bool directed = false;  // ConfigModel and PowerLaw only.
  std::vector<Peak> peaks;
  // ConfigModel: either an explicit sequence (length n) or a histogram.
  std::vector<int> degrees;
  std::optional<DegreeDistribution> distribution;
  double alpha = 2.5;
  int k_min = 1;
  int k_max = 100;
  std::uint64_t seed = 0;

  /// Throws ConfigError when the family parameters are inconsistent.
  void Validate() const;
};

Graph BuildComplete(std::size_t n);

/// Simple graph realizing `degrees` exactly. Stubs are matched uniformly at
/// random; self-loops and multi-edges are then removed with double-edge
/// swaps, giving up after 100 * m swap attempts.
///
/// For directed = true the sequence is read as out-degrees and the
/// in-degrees are a random permutation of the same multiset.
Graph BuildConfigurationModel(std::span<const int> degrees, bool directed,
                              std::uint64_t seed);

/// Directed configuration model with explicit in/out sequences.
Graph BuildDirectedConfigurationModel(std::span<const int> out_degrees,
                                      std::span<const int> in_degrees,
                                      std::uint64_t seed);

/// Each node draws its degree from the peak mixture, then the sequence is
/// wired with the configuration model. Up to 10 fresh draws are tried before
/// reporting failure.
Graph BuildMultimodal(std::size_t n, std::span<const Peak> peaks, std::uint64_t seed);

/// n iid draws from p_k ∝ k^-alpha on [k_min, k_max], sum made even.
std::vector<int> SamplePowerLawDegrees(std::size_t n, double alpha, int k_min,
                                       int k_max, std::uint64_t seed);

/// n iid draws from the peak mixture, sum made even.
std::vector<int> SampleMultimodalDegrees(std::size_t n, std::span<const Peak> peaks,
                                         std::uint64_t seed);

/// Erdős–Gallai test.
bool IsGraphical(std::span<const int> degrees);

Graph Generate(const NetworkSpec& spec);

}  // namespace contagion
