#include "contagion/generators.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <random>
#include <unordered_map>

#include "contagion/error.hpp"
#include "contagion/rng.hpp"

namespace contagion {
namespace {

constexpr int kMaxRedraws = 10;

std::uint64_t Key(NodeId a, NodeId b) {
  return (static_cast<std::uint64_t>(static_cast<std::uint32_t>(a)) << 32) |
         static_cast<std::uint32_t>(b);
}

// Multigraph produced by stub matching, plus the bookkeeping needed to swap
// its bad edges away. For undirected graphs keys are order-independent.
class SwapRepair {
 public:
  SwapRepair(std::vector<Edge> edges, bool directed)
      : edges_(std::move(edges)), directed_(directed) {
    for (const auto& e : edges_) ++mult_[KeyOf(e)];
  }

  // Returns false if the swap budget runs out first.
  bool Run(Rng& rng) {
    std::vector<std::size_t> candidates;
    for (std::size_t i = 0; i < edges_.size(); ++i) {
      if (IsBad(i)) candidates.push_back(i);
    }
    if (candidates.empty()) return true;
    if (edges_.size() < 2) return false;

    const std::size_t budget = 100 * edges_.size();
    std::size_t attempts = 0;
    std::uniform_int_distribution<std::size_t> pick_edge(0, edges_.size() - 1);
    std::bernoulli_distribution coin(0.5);
    while (!candidates.empty()) {
      std::uniform_int_distribution<std::size_t> pick_cand(0, candidates.size() - 1);
      const std::size_t c = pick_cand(rng);
      const std::size_t i = candidates[c];
      if (!IsBad(i)) {
        candidates[c] = candidates.back();
        candidates.pop_back();
        continue;
      }
      if (attempts++ >= budget) return false;
      const std::size_t j = pick_edge(rng);
      if (j == i) continue;

      const Edge e1 = edges_[i];
      Edge e2 = edges_[j];
      if (!directed_ && coin(rng)) std::swap(e2.first, e2.second);
      // Undirected: (a,b),(c,d) -> (a,c),(b,d). Directed: (a,b),(c,d) -> (a,d),(c,b).
      const Edge n1 = directed_ ? Edge{e1.first, e2.second} : Edge{e1.first, e2.first};
      const Edge n2 = directed_ ? Edge{e2.first, e1.second} : Edge{e1.second, e2.second};

      int delta = Remove(e1) + Remove(edges_[j]);
      delta += Add(n1) + Add(n2);
      if (delta > 0) {
        Remove(n1);
        Remove(n2);
        Add(e1);
        Add(edges_[j]);
        continue;
      }
      edges_[i] = n1;
      edges_[j] = n2;
      if (IsBad(i)) candidates.push_back(i);
      if (IsBad(j)) candidates.push_back(j);
    }
    return true;
  }

  const std::vector<Edge>& edges() const { return edges_; }

 private:
  std::uint64_t KeyOf(const Edge& e) const {
    if (!directed_ && e.first > e.second) return Key(e.second, e.first);
    return Key(e.first, e.second);
  }
  bool IsBad(std::size_t i) const {
    const Edge& e = edges_[i];
    return e.first == e.second || mult_.at(KeyOf(e)) > 1;
  }
  // Badness = #loops + sum over pairs of (multiplicity - 1). Each helper
  // returns its change in badness.
  int Remove(const Edge& e) {
    auto& m = mult_[KeyOf(e)];
    --m;
    if (e.first == e.second) return -1;
    return m >= 1 ? -1 : 0;
  }
  int Add(const Edge& e) {
    auto& m = mult_[KeyOf(e)];
    ++m;
    if (e.first == e.second) return 1;
    return m > 1 ? 1 : 0;
  }

  std::vector<Edge> edges_;
  bool directed_;
  std::unordered_map<std::uint64_t, int> mult_;
};

// Resample single entries until the sum is even. Falls back to bumping one
// entry when every support value is odd and resampling cannot help.
template <typename Draw>
void MakeSumEven(std::vector<int>& degrees, Draw&& draw, bool parity_fixable, Rng& rng) {
  if (degrees.empty()) return;
  long long sum = std::accumulate(degrees.begin(), degrees.end(), 0LL);
  if (sum % 2 == 0) return;
  std::uniform_int_distribution<std::size_t> pick(0, degrees.size() - 1);
  if (!parity_fixable) {
    ++degrees[pick(rng)];
    return;
  }
  while (sum % 2 != 0) {
    const std::size_t i = pick(rng);
    const int fresh = draw();
    sum += fresh - degrees[i];
    degrees[i] = fresh;
  }
}

void CheckNodeCount(std::size_t n) {
  if (n > static_cast<std::size_t>(std::numeric_limits<NodeId>::max())) {
    throw GenerationError("node count " + std::to_string(n) + " exceeds id range");
  }
}

bool HasBothParities(const std::vector<double>& pk) {
  bool has_even = false;
  bool has_odd = false;
  for (std::size_t k = 0; k < pk.size(); ++k) {
    if (pk[k] > 0) (k % 2 == 0 ? has_even : has_odd) = true;
  }
  return has_even && has_odd;
}

std::vector<int> SampleFromProbabilities(std::size_t n, const std::vector<double>& pk,
                                         std::uint64_t seed) {
  Rng rng = MakeRng(seed);
  std::discrete_distribution<int> dist(pk.begin(), pk.end());
  std::vector<int> degrees(n);
  for (auto& k : degrees) k = dist(rng);
  MakeSumEven(degrees, [&] { return dist(rng); }, HasBothParities(pk), rng);
  return degrees;
}

}  // namespace

std::string ToString(Family f) {
  switch (f) {
    case Family::Complete: return "complete";
    case Family::MultiModal: return "multimodal";
    case Family::ConfigModel: return "config";
    case Family::PowerLaw: return "powerlaw";
  }
  return "?";
}

Family ParseFamily(const std::string& s) {
  if (s == "complete") return Family::Complete;
  if (s == "multimodal") return Family::MultiModal;
  if (s == "config") return Family::ConfigModel;
  if (s == "powerlaw") return Family::PowerLaw;
  throw ConfigError("unknown network family '" + s + "'");
}

void NetworkSpec::Validate() const {
  switch (family) {
    case Family::Complete:
      break;
    case Family::MultiModal: {
      if (peaks.empty()) throw ConfigError("multimodal network needs at least one peak");
      double total = 0.0;
      for (const auto& p : peaks) {
        if (!(p.weight > 0.0)) throw ConfigError("peak weights must be positive");
        if (p.degree < 0 || static_cast<std::size_t>(p.degree) >= std::max<std::size_t>(n, 1)) {
          throw ConfigError("peak degree " + std::to_string(p.degree) + " must lie in [0, n)");
        }
        total += p.weight;
      }
      if (std::abs(total - 1.0) > 1e-9) throw ConfigError("peak weights must sum to 1");
      break;
    }
    case Family::ConfigModel:
      if (degrees.empty() && !distribution) {
        throw ConfigError("config-model network needs a degree sequence or histogram");
      }
      if (!degrees.empty() && degrees.size() != n) {
        throw ConfigError("degree sequence length " + std::to_string(degrees.size()) +
                          " does not match n=" + std::to_string(n));
      }
      break;
    case Family::PowerLaw:
      if (!(alpha > 1.0)) throw ConfigError("power-law alpha must exceed 1");
      if (k_min < 1 || k_min > k_max || static_cast<std::size_t>(k_max) >= n) {
        throw ConfigError("power-law degrees need 1 <= k_min <= k_max < n");
      }
      break;
  }
}

Graph BuildComplete(std::size_t n) {
  CheckNodeCount(n);
  std::vector<Edge> edges;
  if (n > 1) edges.reserve(n * (n - 1) / 2);
  for (std::size_t u = 0; u < n; ++u) {
    for (std::size_t v = u + 1; v < n; ++v) {
      edges.emplace_back(static_cast<NodeId>(u), static_cast<NodeId>(v));
    }
  }
  return Graph(n, false, std::move(edges));
}

bool IsGraphical(std::span<const int> degrees) {
  std::vector<long long> d(degrees.begin(), degrees.end());
  if (std::any_of(d.begin(), d.end(), [](long long k) { return k < 0; })) return false;
  if (std::accumulate(d.begin(), d.end(), 0LL) % 2 != 0) return false;
  std::sort(d.rbegin(), d.rend());
  const std::size_t n = d.size();
  // Suffix sums of min(d_i, k) are evaluated with a pointer that tracks the
  // first index whose degree is below k.
  std::vector<long long> suffix(n + 1, 0);
  for (std::size_t i = n; i-- > 0;) suffix[i] = suffix[i + 1] + d[i];
  long long lhs = 0;
  std::size_t split = n;
  for (std::size_t k = 1; k <= n; ++k) {
    lhs += d[k - 1];
    const auto kk = static_cast<long long>(k);
    while (split > 0 && d[split - 1] < kk) --split;
    const std::size_t first_small = std::max(split, k);
    const long long big = static_cast<long long>(first_small - k) * kk;
    if (lhs > kk * (kk - 1) + big + suffix[first_small]) return false;
  }
  return true;
}

Graph BuildConfigurationModel(std::span<const int> degrees, bool directed,
                              std::uint64_t seed) {
  if (directed) {
    Rng rng = MakeRng(DeriveSeed(seed, 0));
    std::vector<int> in(degrees.begin(), degrees.end());
    std::shuffle(in.begin(), in.end(), rng);
    return BuildDirectedConfigurationModel(degrees, in, DeriveSeed(seed, 1));
  }
  const std::size_t n = degrees.size();
  CheckNodeCount(n);
  long long sum = 0;
  for (int k : degrees) {
    if (k < 0) throw GenerationError("negative degree in sequence");
    if (n > 0 && static_cast<std::size_t>(k) >= n) {
      throw GenerationError("degree " + std::to_string(k) + " not below n=" + std::to_string(n));
    }
    sum += k;
  }
  if (sum % 2 != 0) throw GenerationError("degree sequence has odd sum " + std::to_string(sum));
  if (!IsGraphical(degrees)) throw GenerationError("degree sequence is not graphical");

  std::vector<NodeId> stubs;
  stubs.reserve(static_cast<std::size_t>(sum));
  for (std::size_t u = 0; u < n; ++u) stubs.insert(stubs.end(), degrees[u], static_cast<NodeId>(u));
  Rng rng = MakeRng(seed);
  std::shuffle(stubs.begin(), stubs.end(), rng);
  std::vector<Edge> edges;
  edges.reserve(stubs.size() / 2);
  for (std::size_t i = 0; i + 1 < stubs.size(); i += 2) edges.emplace_back(stubs[i], stubs[i + 1]);

  SwapRepair repair(std::move(edges), false);
  if (!repair.Run(rng)) {
    throw GenerationError("could not remove self-loops/multi-edges within swap budget");
  }
  return Graph(n, false, repair.edges());
}

Graph BuildDirectedConfigurationModel(std::span<const int> out_degrees,
                                      std::span<const int> in_degrees,
                                      std::uint64_t seed) {
  const std::size_t n = out_degrees.size();
  CheckNodeCount(n);
  if (in_degrees.size() != n) throw GenerationError("in/out degree sequences differ in length");
  long long out_sum = 0;
  long long in_sum = 0;
  for (std::size_t u = 0; u < n; ++u) {
    if (out_degrees[u] < 0 || in_degrees[u] < 0) throw GenerationError("negative degree in sequence");
    if (static_cast<std::size_t>(out_degrees[u]) >= n || static_cast<std::size_t>(in_degrees[u]) >= n) {
      throw GenerationError("degree not below n=" + std::to_string(n));
    }
    out_sum += out_degrees[u];
    in_sum += in_degrees[u];
  }
  if (out_sum != in_sum) throw GenerationError("in- and out-degree sums differ");

  std::vector<NodeId> heads;
  heads.reserve(static_cast<std::size_t>(in_sum));
  for (std::size_t u = 0; u < n; ++u) heads.insert(heads.end(), in_degrees[u], static_cast<NodeId>(u));
  Rng rng = MakeRng(seed);
  std::shuffle(heads.begin(), heads.end(), rng);
  std::vector<Edge> arcs;
  arcs.reserve(heads.size());
  std::size_t h = 0;
  for (std::size_t u = 0; u < n; ++u) {
    for (int s = 0; s < out_degrees[u]; ++s) arcs.emplace_back(static_cast<NodeId>(u), heads[h++]);
  }

  SwapRepair repair(std::move(arcs), true);
  if (!repair.Run(rng)) {
    throw GenerationError("could not remove self-loops/multi-arcs within swap budget");
  }
  return Graph(n, true, repair.edges());
}

std::vector<int> SamplePowerLawDegrees(std::size_t n, double alpha, int k_min, int k_max,
                                       std::uint64_t seed) {
  if (!(alpha > 1.0) || k_min < 1 || k_min > k_max) {
    throw ConfigError("power-law sampling needs alpha > 1 and 1 <= k_min <= k_max");
  }
  std::vector<double> pk(static_cast<std::size_t>(k_max) + 1, 0.0);
  for (int k = k_min; k <= k_max; ++k) pk[k] = std::pow(static_cast<double>(k), -alpha);
  return SampleFromProbabilities(n, pk, seed);
}

std::vector<int> SampleMultimodalDegrees(std::size_t n, std::span<const Peak> peaks,
                                         std::uint64_t seed) {
  int kmax = 0;
  for (const auto& p : peaks) kmax = std::max(kmax, p.degree);
  std::vector<double> pk(static_cast<std::size_t>(kmax) + 1, 0.0);
  for (const auto& p : peaks) pk[p.degree] += p.weight;
  return SampleFromProbabilities(n, pk, seed);
}

Graph BuildMultimodal(std::size_t n, std::span<const Peak> peaks, std::uint64_t seed) {
  NetworkSpec spec;
  spec.family = Family::MultiModal;
  spec.n = n;
  spec.peaks.assign(peaks.begin(), peaks.end());
  spec.Validate();
  std::string last_error;
  for (int attempt = 0; attempt < kMaxRedraws; ++attempt) {
    const std::uint64_t s = DeriveSeed(seed, static_cast<std::uint64_t>(attempt));
    const auto degrees = SampleMultimodalDegrees(n, peaks, DeriveSeed(s, 0));
    try {
      return BuildConfigurationModel(degrees, false, DeriveSeed(s, 1));
    } catch (const GenerationError& e) {
      last_error = e.what();
    }
  }
  throw GenerationError("multimodal generation failed after " + std::to_string(kMaxRedraws) +
                        " draws: " + last_error);
}

Graph Generate(const NetworkSpec& spec) {
  spec.Validate();
  switch (spec.family) {
    case Family::Complete:
      return BuildComplete(spec.n);
    case Family::MultiModal:
      return BuildMultimodal(spec.n, spec.peaks, spec.seed);
    case Family::ConfigModel: {
      if (!spec.degrees.empty()) {
        return BuildConfigurationModel(spec.degrees, spec.directed, spec.seed);
      }
      const auto& dist = *spec.distribution;
      std::vector<int> degrees;
      if (static_cast<std::size_t>(dist.num_nodes()) == spec.n) {
        // Realize the histogram exactly; only the assignment to ids is random.
        degrees = dist.expand();
        Rng rng = MakeRng(DeriveSeed(spec.seed, 0));
        std::shuffle(degrees.begin(), degrees.end(), rng);
        if (!spec.directed) {
          const auto pk = dist.probabilities();
          std::discrete_distribution<int> redraw(pk.begin(), pk.end());
          MakeSumEven(degrees, [&] { return redraw(rng); }, HasBothParities(pk), rng);
        }
      } else {
        degrees = SampleFromProbabilities(spec.n, dist.probabilities(), DeriveSeed(spec.seed, 0));
      }
      return BuildConfigurationModel(degrees, spec.directed, DeriveSeed(spec.seed, 1));
    }
    case Family::PowerLaw: {
      const auto degrees = SamplePowerLawDegrees(spec.n, spec.alpha, spec.k_min, spec.k_max,
                                                 DeriveSeed(spec.seed, 0));
      return BuildConfigurationModel(degrees, spec.directed, DeriveSeed(spec.seed, 1));
    }
  }
  throw ConfigError("unhandled network family");
}

}  // namespace contagion
