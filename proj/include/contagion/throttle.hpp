#pragma once

#include <cstddef>
#include <cstdint>
#include <deque>
#include <limits>
#include <optional>
#include <variant>
#include <vector>

namespace contagion {

/// Destination of a connection attempt. Node ids map to themselves; scanning
/// worms may also address hosts outside the simulated population.
using Address = std::uint64_t;

struct ThrottleConfig {
  /// Queue releases per second. May be +infinity (no rate limit).
  double rate = 1.0;
  std::size_t working_set_capacity = 4;
  /// nullopt means unbounded.
  std::optional<std::size_t> queue_capacity;

  /// Throws ConfigError unless rate > 0.
  void Validate() const;
};

struct Admitted {};
struct Enqueued {
  std::size_t position = 0;  // 0 = head of the delay queue
};
using RequestResult = std::variant<Admitted, Enqueued>;

struct Release {
  Address dest = 0;
  double enqueued_at = 0.0;
  double released_at = 0.0;
  double delay() const { return released_at - enqueued_at; }
};

struct PendingRequest {
  Address dest = 0;
  double enqueued_at = 0.0;
};

/// Per-host connection throttle.
///
/// Requests to destinations in the working set pass straight through.
/// Anything else waits in a FIFO delay queue that drains at `rate` per
/// second. Release credit accrues continuously and is capped at one token,
/// so an idle host can release one request immediately but never bursts.
/// Released destinations join the working set, evicting the least recently
/// used entry.
class Throttle {
 public:
  explicit Throttle(ThrottleConfig config, double start_time = 0.0,
                    double initial_budget = 1.0);

  /// Throws ContractViolation if t precedes the last update.
  RequestResult request(Address dest, double t);

  /// Accrues credit up to t and releases queue heads while a full token is
  /// available. With a non-empty working set, other queued requests to a
  /// released destination leave on the same token. Throws ContractViolation
  /// if t precedes the last update.
  std::vector<Release> tick(double t);

  /// Earliest time at which tick() would release something, or +infinity
  /// when the queue is empty.
  double next_release_time() const;

  const ThrottleConfig& config() const { return config_; }
  /// Least recently used first.
  const std::vector<Address>& working_set() const { return working_set_; }
  const std::deque<PendingRequest>& queue() const { return queue_; }
  std::size_t queue_length() const { return queue_.size(); }
  double budget() const { return budget_; }
  double last_update() const { return last_update_; }
  std::uint64_t drops() const { return drops_; }
  /// Entries dropped by queue overflow, oldest first, since the last call.
  std::vector<PendingRequest> take_dropped();

 private:
  void Touch(Address dest);
  void CheckTime(double t) const;

  ThrottleConfig config_;
  std::vector<Address> working_set_;
  std::deque<PendingRequest> queue_;
  double budget_;
  double last_update_;
  std::uint64_t drops_ = 0;
  std::vector<PendingRequest> dropped_;
};

}  // namespace contagion
