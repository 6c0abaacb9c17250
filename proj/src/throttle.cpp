#include "contagion/throttle.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "contagion/error.hpp"

namespace contagion {
namespace {

// Absorbs floating-point drift when credit is accumulated over many ticks.
constexpr double kTokenEpsilon = 1e-9;

}  // namespace

void ThrottleConfig::Validate() const {
  if (!(rate > 0.0)) throw ConfigError("throttle rate must be positive");
}

Throttle::Throttle(ThrottleConfig config, double start_time, double initial_budget)
    : config_(config),
      budget_(std::clamp(initial_budget, 0.0, 1.0)),
      last_update_(start_time) {
  config_.Validate();
  working_set_.reserve(config_.working_set_capacity);
}

void Throttle::CheckTime(double t) const {
  if (t < last_update_) {
    throw ContractViolation("throttle time moved backwards: " + std::to_string(t) + " < " +
                            std::to_string(last_update_));
  }
}

void Throttle::Touch(Address dest) {
  if (config_.working_set_capacity == 0) return;
  const auto it = std::find(working_set_.begin(), working_set_.end(), dest);
  if (it != working_set_.end()) {
    working_set_.erase(it);
  } else if (working_set_.size() == config_.working_set_capacity) {
    working_set_.erase(working_set_.begin());
  }
  working_set_.push_back(dest);
}

RequestResult Throttle::request(Address dest, double t) {
  CheckTime(t);
  if (std::find(working_set_.begin(), working_set_.end(), dest) != working_set_.end()) {
    Touch(dest);
    return Admitted{};
  }
  queue_.push_back({dest, t});
  if (config_.queue_capacity && queue_.size() > *config_.queue_capacity) {
    dropped_.push_back(queue_.front());
    queue_.pop_front();
    ++drops_;
  }
  return Enqueued{queue_.empty() ? 0 : queue_.size() - 1};
}

std::vector<Release> Throttle::tick(double t) {
  CheckTime(t);
  if (std::isinf(config_.rate)) {
    budget_ = 1.0;
  } else {
    budget_ = std::min(1.0, budget_ + config_.rate * (t - last_update_));
  }
  last_update_ = t;
  std::vector<Release> released;
  while (budget_ >= 1.0 - kTokenEpsilon && !queue_.empty()) {
    const PendingRequest head = queue_.front();
    queue_.pop_front();
    budget_ = std::max(0.0, budget_ - 1.0);
    if (std::isinf(config_.rate)) budget_ = 1.0;
    Touch(head.dest);
    released.push_back({head.dest, head.enqueued_at, t});
    // Pending requests to the same destination go out with it: it is now in
    // the working set, where a fresh request would be admitted anyway.
    for (auto it = queue_.begin(); config_.working_set_capacity > 0 && it != queue_.end();) {
      if (it->dest == head.dest) {
        released.push_back({it->dest, it->enqueued_at, t});
        it = queue_.erase(it);
      } else {
        ++it;
      }
    }
  }
  return released;
}

double Throttle::next_release_time() const {
  if (queue_.empty()) return std::numeric_limits<double>::infinity();
  if (budget_ >= 1.0 - kTokenEpsilon || std::isinf(config_.rate)) return last_update_;
  return last_update_ + (1.0 - budget_) / config_.rate;
}

std::vector<PendingRequest> Throttle::take_dropped() {
  std::vector<PendingRequest> out;
  out.swap(dropped_);
  return out;
}

}  // namespace contagion
