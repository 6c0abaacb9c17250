#include "contagion/throttle_trace.hpp"

#include <charconv>
#include <istream>
#include <ostream>

#include <fmt/format.h>

#include "contagion/error.hpp"

namespace contagion {

std::string ToString(DecisionKind k) {
  switch (k) {
    case DecisionKind::Admit: return "admit";
    case DecisionKind::Release: return "release";
    case DecisionKind::Drop: return "drop";
  }
  return "?";
}

std::vector<TraceEvent> ParseTrace(std::istream& in, const std::string& source) {
  std::vector<TraceEvent> trace;
  std::string line;
  std::size_t line_no = 0;
  bool header = false;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || line.front() == '#') continue;
    if (!header) {
      if (line != kTraceHeader) throw ParseError(source, line_no, "expected header 't,dest'");
      header = true;
      continue;
    }
    const auto comma = line.find(',');
    if (comma == std::string::npos) throw ParseError(source, line_no, "expected 't,dest'");
    TraceEvent ev;
    const char* b = line.data();
    const char* mid = b + comma;
    const char* end = b + line.size();
    auto [p1, e1] = std::from_chars(b, mid, ev.t);
    if (e1 != std::errc() || p1 != mid || !(ev.t >= 0.0)) {
      throw ParseError(source, line_no, "bad time '" + line.substr(0, comma) + "'");
    }
    auto [p2, e2] = std::from_chars(mid + 1, end, ev.dest);
    if (e2 != std::errc() || p2 != end) {
      throw ParseError(source, line_no, "bad destination '" + line.substr(comma + 1) + "'");
    }
    if (!trace.empty() && ev.t < trace.back().t) {
      throw ParseError(source, line_no, "trace times must be non-decreasing");
    }
    trace.push_back(ev);
  }
  if (!header) throw ParseError(source, line_no, "missing header 't,dest'");
  return trace;
}

std::vector<Decision> ReplayTrace(std::span<const TraceEvent> trace, const ThrottleConfig& config) {
  const double start = trace.empty() ? 0.0 : trace.front().t;
  Throttle throttle(config, start);
  std::vector<Decision> out;
  auto record_releases = [&](const std::vector<Release>& releases) {
    for (const auto& r : releases) out.push_back({r.released_at, r.dest, DecisionKind::Release, r.delay()});
  };
  auto drain_until = [&](double t) {
    while (throttle.queue_length() > 0 && throttle.next_release_time() <= t) {
      record_releases(throttle.tick(std::max(throttle.next_release_time(), throttle.last_update())));
    }
  };

  for (const auto& ev : trace) {
    drain_until(ev.t);
    const auto result = throttle.request(ev.dest, ev.t);
    if (std::holds_alternative<Admitted>(result)) {
      out.push_back({ev.t, ev.dest, DecisionKind::Admit, 0.0});
      continue;
    }
    for (const auto& d : throttle.take_dropped()) {
      out.push_back({ev.t, d.dest, DecisionKind::Drop, ev.t - d.enqueued_at});
    }
    record_releases(throttle.tick(ev.t));
  }
  while (throttle.queue_length() > 0) {
    record_releases(throttle.tick(std::max(throttle.next_release_time(), throttle.last_update())));
  }
  return out;
}

void WriteDecisionsCsv(std::span<const Decision> decisions, std::ostream& out) {
  out << kDecisionHeader << '\n';
  for (const auto& d : decisions) {
    out << fmt::format("{:.10g},{},{},{:.10g}\n", d.t, d.dest, ToString(d.kind), d.delay);
  }
}

}  // namespace contagion
