#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "contagion/graph.hpp"
#include "contagion/rng.hpp"
#include "contagion/throttle.hpp"

namespace contagion {

enum class Compartment : std::uint8_t { Susceptible, Infected, Recovered };

enum class Targeting {
  NeighborList,  // uniform over the source's out-neighbours
  RandomScan,    // uniform over an address space; ids >= n are misses
};

std::string ToString(Targeting t);
/// Accepts neighbor|scan.
Targeting ParseTargeting(const std::string& s);

struct WormBehavior {
  Targeting targeting = Targeting::NeighborList;
  /// New-connection attempts per second per infected host.
  double attempt_rate = 1.0;
  double infection_probability = 1.0;
  /// RandomScan address-space size; 0 means "the node count".
  std::uint64_t address_space = 0;

  void Validate(std::size_t n) const;
};

/// How a host's throttle credit stands at the moment it is infected.
///
/// Throttle state only matters once a host emits worm traffic, so it is
/// armed on infection. `RandomPhase` draws the credit uniformly from [0, 1),
/// which is what a host whose release clock runs independently of the worm's
/// arrival sees; the first queued attempt then leaves after U(0, 1/r]
/// seconds. `Full` models a host that was idle for at least 1/r before
/// infection and releases its first attempt at once.
enum class ThrottleStart { RandomPhase, Full, Empty };

std::string ToString(ThrottleStart s);
/// Accepts phase|full|empty.
ThrottleStart ParseThrottleStart(const std::string& s);

struct Controls {
  /// Vaccinated hosts start (and stay) Recovered.
  std::vector<NodeId> vaccinated;
  std::optional<ThrottleConfig> throttle;
  ThrottleStart throttle_start = ThrottleStart::RandomPhase;
};

struct RunOptions {
  double dt = 0.1;
  double t_max = 3600.0;
  std::uint64_t seed = 0;
  /// Total connection attempts generated per tick are clamped to this.
  std::uint64_t max_attempts_per_tick = 1'000'000;
  /// Stop once infected >= stop_fraction * n.
  std::optional<double> stop_fraction;
};

struct TimeSeriesRow {
  std::int64_t tick = 0;
  double t = 0.0;
  std::int64_t susceptible = 0;
  std::int64_t infected = 0;
  std::int64_t recovered = 0;
  /// Attempts sitting in throttle queues at the end of the tick.
  std::int64_t queued = 0;
  /// Attempts delivered during the tick (admitted directly or released).
  std::int64_t admitted = 0;

  friend bool operator==(const TimeSeriesRow&, const TimeSeriesRow&) = default;
};

struct TimeSeries {
  std::vector<TimeSeriesRow> rows;

  std::int64_t num_nodes() const;
  void WriteCsv(std::ostream& out) const;
  std::string ToCsv() const;

  friend bool operator==(const TimeSeries&, const TimeSeries&) = default;
};

inline constexpr const char* kTimeSeriesHeader =
    "tick,t,susceptible,infected,recovered,queued,admitted";

struct EpidemicState {
  std::vector<Compartment> compartments;
  std::int64_t tick = 0;
  double dt = 0.1;

  double t() const { return static_cast<double>(tick) * dt; }
  std::int64_t count(Compartment c) const;
};

/// Discrete-time SI spreading engine.
///
/// Each tick every infected host makes Poisson(rate * dt) connection
/// attempts. The per-host counts are drawn as one Poisson total over all
/// hosts infected at the start of the tick, each attempt then picking its
/// source uniformly among them; by Poisson splitting this is the same
/// process. Hosts infected during a tick start attempting on the next one.
///
/// With throttling, every attempt goes through the source's throttle:
/// working-set hits are delivered at once, other attempts queue and are
/// delivered when released. Directed graphs spread along out-edges only.
class Epidemic {
 public:
  /// Throws ConfigError for invalid worm parameters, out-of-range ids, or
  /// initially infected hosts that are also vaccinated.
  Epidemic(const Graph& g, WormBehavior worm, const Controls& controls,
           std::span<const NodeId> initially_infected, double dt, std::uint64_t seed,
           std::uint64_t max_attempts_per_tick = 1'000'000);

  /// Advances one tick and returns the row describing the new state.
  TimeSeriesRow Step();

  /// Row for the current state (no delivery activity).
  TimeSeriesRow Snapshot() const;

  /// True when no further infection is possible.
  bool Exhausted() const;

  const EpidemicState& state() const { return state_; }
  std::int64_t susceptible() const { return susceptible_; }
  std::int64_t infected() const { return static_cast<std::int64_t>(infected_.size()); }
  const std::optional<Throttle>& throttle(NodeId u) const { return throttles_[u]; }

 private:
  void Deliver(Address dest, double t);
  void Infect(NodeId v, double t);
  void DeliverReleases(const std::vector<Release>& releases, double t);

  const Graph& graph_;
  WormBehavior worm_;
  std::optional<ThrottleConfig> throttle_config_;
  ThrottleStart throttle_start_;
  std::uint64_t max_attempts_;
  EpidemicState state_;
  std::vector<NodeId> infected_;
  std::vector<std::optional<Throttle>> throttles_;
  std::int64_t susceptible_ = 0;
  std::int64_t recovered_ = 0;
  std::int64_t queued_ = 0;
  std::int64_t delivered_this_tick_ = 0;
  // Infected-to-susceptible edges; zero means neighbour-list spread is over.
  std::int64_t frontier_ = 0;
  Rng dynamics_rng_;
  Rng phase_rng_;
};

/// Steps until t_max, exhaustion, or the optional stop fraction. Row 0 is
/// the initial state.
TimeSeries Run(const Graph& g, const WormBehavior& worm, const Controls& controls,
               std::span<const NodeId> initially_infected, const RunOptions& options);

/// Thrown when a time series has too few rows in the window a metric needs.
class InsufficientData : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// Least-squares slope of ln(infected) against t over rows with
/// 2 <= infected <= n/2. Requires at least 3 such rows.
double GrowthRate(const TimeSeries& ts);

/// First t with infected >= q * n, or nullopt if never reached.
std::optional<double> TimeToFraction(const TimeSeries& ts, double q);

enum class SlowdownMetric { TimeToFraction, GrowthRate };

/// TimeToFraction: treated time / baseline time. GrowthRate: baseline rate /
/// treated rate. nullopt when either run never reaches q.
std::optional<double> SlowdownFactor(const TimeSeries& baseline, const TimeSeries& treated,
                                     SlowdownMetric metric, double q = 0.95);

}  // namespace contagion
