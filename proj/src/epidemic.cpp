#include "contagion/epidemic.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <ostream>
#include <random>
#include <sstream>

#include <fmt/format.h>

#include "contagion/error.hpp"

namespace contagion {
namespace {

constexpr double kTimeEpsilon = 1e-9;

}  // namespace

std::string ToString(Targeting t) {
  return t == Targeting::NeighborList ? "neighbor" : "scan";
}

Targeting ParseTargeting(const std::string& s) {
  if (s == "neighbor") return Targeting::NeighborList;
  if (s == "scan") return Targeting::RandomScan;
  throw ConfigError("unknown targeting '" + s + "' (expected neighbor|scan)");
}

std::string ToString(ThrottleStart s) {
  switch (s) {
    case ThrottleStart::RandomPhase: return "phase";
    case ThrottleStart::Full: return "full";
    case ThrottleStart::Empty: return "empty";
  }
  return "?";
}

ThrottleStart ParseThrottleStart(const std::string& s) {
  if (s == "phase") return ThrottleStart::RandomPhase;
  if (s == "full") return ThrottleStart::Full;
  if (s == "empty") return ThrottleStart::Empty;
  throw ConfigError("unknown throttle start '" + s + "' (expected phase|full|empty)");
}

void WormBehavior::Validate(std::size_t n) const {
  if (!(attempt_rate > 0.0) || !std::isfinite(attempt_rate)) {
    throw ConfigError("worm attempt rate must be positive and finite");
  }
  if (!(infection_probability > 0.0 && infection_probability <= 1.0)) {
    throw ConfigError("infection probability must lie in (0, 1]");
  }
  if (targeting == Targeting::RandomScan && address_space != 0 && address_space < n) {
    throw ConfigError("scan address space must be at least the node count");
  }
}

std::int64_t EpidemicState::count(Compartment c) const {
  return std::count(compartments.begin(), compartments.end(), c);
}

std::int64_t TimeSeries::num_nodes() const {
  if (rows.empty()) return 0;
  const auto& r = rows.front();
  return r.susceptible + r.infected + r.recovered;
}

void TimeSeries::WriteCsv(std::ostream& out) const {
  out << kTimeSeriesHeader << '\n';
  for (const auto& r : rows) {
    out << fmt::format("{},{:.10g},{},{},{},{},{}\n", r.tick, r.t, r.susceptible, r.infected,
                       r.recovered, r.queued, r.admitted);
  }
}

std::string TimeSeries::ToCsv() const {
  std::ostringstream out;
  WriteCsv(out);
  return out.str();
}

Epidemic::Epidemic(const Graph& g, WormBehavior worm, const Controls& controls,
                   std::span<const NodeId> initially_infected, double dt, std::uint64_t seed,
                   std::uint64_t max_attempts_per_tick)
    : graph_(g),
      worm_(worm),
      throttle_config_(controls.throttle),
      throttle_start_(controls.throttle_start),
      max_attempts_(max_attempts_per_tick),
      dynamics_rng_(DeriveSeed(seed, stream::kDynamics)),
      phase_rng_(DeriveSeed(seed, stream::kThrottlePhase)) {
  const std::size_t n = g.num_nodes();
  worm_.Validate(n);
  if (worm_.address_space == 0) worm_.address_space = n;
  if (!(dt > 0.0)) throw ConfigError("dt must be positive");
  if (throttle_config_) throttle_config_->Validate();

  state_.dt = dt;
  state_.compartments.assign(n, Compartment::Susceptible);
  throttles_.resize(n);
  susceptible_ = static_cast<std::int64_t>(n);

  auto check_id = [n](NodeId u, const char* what) {
    if (u < 0 || static_cast<std::size_t>(u) >= n) {
      throw ConfigError(std::string(what) + " node " + std::to_string(u) + " out of range");
    }
  };
  for (NodeId u : controls.vaccinated) {
    check_id(u, "vaccinated");
    if (state_.compartments[u] == Compartment::Recovered) continue;
    state_.compartments[u] = Compartment::Recovered;
    --susceptible_;
    ++recovered_;
  }
  for (NodeId u : initially_infected) {
    check_id(u, "initially infected");
    if (state_.compartments[u] == Compartment::Recovered) {
      throw ConfigError("node " + std::to_string(u) + " is both vaccinated and initially infected");
    }
    if (state_.compartments[u] == Compartment::Infected) continue;
    Infect(u, 0.0);
  }
}

void Epidemic::Infect(NodeId v, double t) {
  state_.compartments[v] = Compartment::Infected;
  --susceptible_;
  infected_.push_back(v);
  for (NodeId u : graph_.in_neighbors(v)) {
    if (state_.compartments[u] == Compartment::Infected && u != v) --frontier_;
  }
  for (NodeId w : graph_.out_neighbors(v)) {
    if (state_.compartments[w] == Compartment::Susceptible) ++frontier_;
  }
  if (throttle_config_) {
    double budget = 1.0;
    if (throttle_start_ == ThrottleStart::RandomPhase) {
      budget = std::uniform_real_distribution<double>(0.0, 1.0)(phase_rng_);
    } else if (throttle_start_ == ThrottleStart::Empty) {
      budget = 0.0;
    }
    throttles_[v].emplace(*throttle_config_, t, budget);
  }
}

void Epidemic::Deliver(Address dest, double t) {
  ++delivered_this_tick_;
  if (dest >= graph_.num_nodes()) return;
  const auto v = static_cast<NodeId>(dest);
  if (state_.compartments[v] != Compartment::Susceptible) return;
  if (worm_.infection_probability < 1.0 &&
      std::uniform_real_distribution<double>(0.0, 1.0)(dynamics_rng_) >= worm_.infection_probability) {
    return;
  }
  Infect(v, t);
}

void Epidemic::DeliverReleases(const std::vector<Release>& releases, double t) {
  queued_ -= static_cast<std::int64_t>(releases.size());
  for (const auto& r : releases) Deliver(r.dest, t);
}

TimeSeriesRow Epidemic::Snapshot() const {
  TimeSeriesRow row;
  row.tick = state_.tick;
  row.t = state_.t();
  row.susceptible = susceptible_;
  row.infected = infected();
  row.recovered = recovered_;
  row.queued = queued_;
  return row;
}

bool Epidemic::Exhausted() const {
  if (infected_.empty() || susceptible_ == 0) return true;
  return worm_.targeting == Targeting::NeighborList && frontier_ == 0;
}

TimeSeriesRow Epidemic::Step() {
  const double t = state_.t();
  delivered_this_tick_ = 0;
  const std::size_t sources = infected_.size();

  // Queue entries whose credit matured since the last tick.
  if (throttle_config_) {
    for (std::size_t i = 0; i < sources; ++i) {
      auto& th = throttles_[infected_[i]];
      if (th->queue_length() > 0 && th->next_release_time() <= t + kTimeEpsilon) {
        DeliverReleases(th->tick(t), t);
      }
    }
  }

  const double mean_attempts =
      static_cast<double>(sources) * worm_.attempt_rate * state_.dt;
  std::uint64_t attempts = 0;
  if (mean_attempts > 0.0) {
    attempts = std::min<std::uint64_t>(
        static_cast<std::uint64_t>(std::poisson_distribution<long long>(mean_attempts)(dynamics_rng_)),
        max_attempts_);
  }
  std::uniform_int_distribution<std::size_t> pick_source(0, sources == 0 ? 0 : sources - 1);
  std::uniform_int_distribution<std::uint64_t> pick_address(0, worm_.address_space - 1);
  for (std::uint64_t a = 0; a < attempts; ++a) {
    const NodeId src = infected_[pick_source(dynamics_rng_)];
    Address dest = 0;
    if (worm_.targeting == Targeting::NeighborList) {
      const auto nbrs = graph_.out_neighbors(src);
      if (nbrs.empty()) continue;
      dest = static_cast<Address>(
          nbrs[std::uniform_int_distribution<std::size_t>(0, nbrs.size() - 1)(dynamics_rng_)]);
    } else {
      dest = pick_address(dynamics_rng_);
    }
    if (!throttle_config_) {
      Deliver(dest, t);
      continue;
    }
    auto& th = *throttles_[src];
    const auto dropped_before = th.drops();
    if (std::holds_alternative<Admitted>(th.request(dest, t))) {
      Deliver(dest, t);
    } else {
      queued_ += 1 - static_cast<std::int64_t>(th.drops() - dropped_before);
      th.take_dropped();
      DeliverReleases(th.tick(t), t);
    }
  }

  ++state_.tick;
  TimeSeriesRow row = Snapshot();
  row.admitted = delivered_this_tick_;
  return row;
}

TimeSeries Run(const Graph& g, const WormBehavior& worm, const Controls& controls,
               std::span<const NodeId> initially_infected, const RunOptions& options) {
  if (!(options.t_max > 0.0)) throw ConfigError("t_max must be positive");
  Epidemic sim(g, worm, controls, initially_infected, options.dt, options.seed,
               options.max_attempts_per_tick);
  const auto n = static_cast<double>(g.num_nodes());
  auto reached_stop = [&] {
    return options.stop_fraction &&
           static_cast<double>(sim.infected()) >= *options.stop_fraction * n;
  };
  TimeSeries ts;
  ts.rows.push_back(sim.Snapshot());
  const auto last_tick = static_cast<std::int64_t>(std::floor(options.t_max / options.dt + kTimeEpsilon));
  while (sim.state().tick < last_tick && !sim.Exhausted() && !reached_stop()) {
    ts.rows.push_back(sim.Step());
  }
  return ts;
}

double GrowthRate(const TimeSeries& ts) {
  const double n = static_cast<double>(ts.num_nodes());
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  std::size_t m = 0;
  for (const auto& r : ts.rows) {
    if (r.infected < 2 || static_cast<double>(r.infected) > 0.5 * n) continue;
    const double y = std::log(static_cast<double>(r.infected));
    sx += r.t;
    sy += y;
    sxx += r.t * r.t;
    sxy += r.t * y;
    ++m;
  }
  if (m < 3) {
    throw InsufficientData("growth rate needs at least 3 rows with 2 <= infected <= n/2, found " +
                           std::to_string(m));
  }
  const double md = static_cast<double>(m);
  const double denom = md * sxx - sx * sx;
  if (denom <= 0.0) throw InsufficientData("growth-rate window spans no time");
  return (md * sxy - sx * sy) / denom;
}

std::optional<double> TimeToFraction(const TimeSeries& ts, double q) {
  const double target = q * static_cast<double>(ts.num_nodes());
  for (const auto& r : ts.rows) {
    if (static_cast<double>(r.infected) >= target) return r.t;
  }
  return std::nullopt;
}

std::optional<double> SlowdownFactor(const TimeSeries& baseline, const TimeSeries& treated,
                                     SlowdownMetric metric, double q) {
  if (metric == SlowdownMetric::GrowthRate) {
    return GrowthRate(baseline) / GrowthRate(treated);
  }
  const auto base = TimeToFraction(baseline, q);
  const auto slow = TimeToFraction(treated, q);
  if (!base || !slow) return std::nullopt;
  if (*base <= 0.0) throw InsufficientData("baseline reached the target fraction at t=0");
  return *slow / *base;
}

}  // namespace contagion
