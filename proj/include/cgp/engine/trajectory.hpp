#pragma once

#include <cstdint>
#include <ostream>
#include <span>
#include <string>
#include <vector>

#include "cgp/engine/proxies.hpp"
#include "cgp/engine/timepoint.hpp"

namespace cgp {

/// One tie group: every agent in jump_set jumped at time tau, after which the
/// cumulative count is n and the agents hold `values`.
struct StepEvent {
  std::uint64_t n = 0;
  TimePoint tau;
  std::vector<std::uint32_t> jump_set;
  std::vector<std::uint64_t> values;
};

struct Trajectory {
  std::vector<std::uint64_t> initial_values;
  std::uint64_t horizon = 0;
  NumericMode mode = NumericMode::float_mode;
  std::vector<StepEvent> events;
  std::vector<std::uint64_t> final_values;
  /// Number of groups in which at least two distinct agents jumped.
  std::uint64_t tie_count = 0;
  /// Float mode only: some positive waiting time was absorbed by the clock.
  bool explosion_flag = false;

  [[nodiscard]] std::uint64_t initial_total() const {
    std::uint64_t s = 0;
    for (auto v : initial_values) s += v;
    return s;
  }
};

inline EventProxies detect_events(const Trajectory& traj, double beta = 0.5) {
  if (traj.events.empty()) throw std::invalid_argument("detect_events: empty trajectory");
  EventProxyTracker tracker(traj.initial_values, traj.horizon, beta);
  for (const auto& e : traj.events) tracker.observe(e.n, e.jump_set, e.values);
  return tracker.result();
}

/// One JSON object per line: n, tau, agents, values. Exact times render as "num/2^exp".
inline void export_trajectory(const Trajectory& traj, std::ostream& os) {
  for (const auto& e : traj.events) {
    os << "{\"n\":" << e.n << ",\"tau\":";
    if (e.tau.exact()) {
      os << '"' << e.tau.str() << '"';
    } else {
      os << e.tau.str();
    }
    os << ",\"agents\":[";
    for (std::size_t i = 0; i < e.jump_set.size(); ++i) os << (i ? "," : "") << e.jump_set[i];
    os << "],\"values\":[";
    for (std::size_t i = 0; i < e.values.size(); ++i) os << (i ? "," : "") << e.values[i];
    os << "]}\n";
  }
}

}  // namespace cgp
