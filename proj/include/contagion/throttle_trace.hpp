#pragma once

#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "contagion/throttle.hpp"

namespace contagion {

struct TraceEvent {
  double t = 0.0;
  Address dest = 0;
};

enum class DecisionKind { Admit, Release, Drop };

std::string ToString(DecisionKind k);

struct Decision {
  double t = 0.0;
  Address dest = 0;
  DecisionKind kind = DecisionKind::Admit;
  /// Seconds spent queued (0 for admits).
  double delay = 0.0;

  friend bool operator==(const Decision&, const Decision&) = default;
};

inline constexpr const char* kTraceHeader = "t,dest";
inline constexpr const char* kDecisionHeader = "t,dest,decision,delay";

/// CSV with header `t,dest`. Times must be non-decreasing.
std::vector<TraceEvent> ParseTrace(std::istream& in, const std::string& source = "<stream>");

/// Feeds the trace through one throttle, releasing queued requests at the
/// exact instants their credit matures, and drains the queue after the last
/// event. Decisions come out in time order.
std::vector<Decision> ReplayTrace(std::span<const TraceEvent> trace, const ThrottleConfig& config);

void WriteDecisionsCsv(std::span<const Decision> decisions, std::ostream& out);

}  // namespace contagion
