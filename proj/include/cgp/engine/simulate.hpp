#pragma once

#include <cstdint>
#include <functional>
#include <queue>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "cgp/engine/trajectory.hpp"
#include "cgp/errors.hpp"
#include "cgp/families/law.hpp"
#include "cgp/numerics/dyadic.hpp"

namespace cgp {

struct ProcessConfig {
  std::vector<std::uint64_t> initial;  // v_a(0); its size is the agent count
  WaitingFamilyPtr family;
  std::uint64_t horizon = 0;  // increments beyond sum_a v_a(0)
  NumericMode mode = NumericMode::float_mode;
  std::uint64_t seed = 0;
  /// Largest tolerated overshoot of the final tie group (zero waiting times can chain).
  std::uint64_t max_group_overshoot = std::uint64_t{1} << 20;
};

/// A tie group as seen by observers; spans are valid only during the callback.
struct GroupEvent {
  std::uint64_t n;
  const TimePoint& tau;
  std::span<const std::uint32_t> jump_set;
  std::span<const std::uint64_t> values;
};

inline void validate(const ProcessConfig& cfg) {
  if (cfg.initial.size() < 2) throw PreconditionError("need at least two agents");
  if (!cfg.family) throw PreconditionError("no waiting-time family");
  const auto kind = cfg.family->support_kind();
  switch (cfg.mode) {
    case NumericMode::float_mode:
      if (kind != SupportKind::atomless) {
        throw PreconditionError(cfg.family->canonical() +
                                " has atoms; float mode cannot detect ties soundly, use an exact mode");
      }
      break;
    case NumericMode::exact_dyadic:
      if (kind == SupportKind::atomless) {
        throw PreconditionError(cfg.family->canonical() + " is atomless; exact modes need a lattice family");
      }
      break;
    case NumericMode::exact_integer:
      if (kind != SupportKind::integer_lattice) {
        throw PreconditionError(cfg.family->canonical() + " is not integer-valued");
      }
      break;
  }
}

namespace detail {

template <class T>
struct Clock;

template <>
struct Clock<double> {
  static double draw(const WaitingFamily& f, std::uint64_t j, Rng& rng) { return f.sample(j, rng); }
};

template <>
struct Clock<Dyadic> {
  static Dyadic draw(const WaitingFamily& f, std::uint64_t j, Rng& rng) { return f.sample_exact(j, rng); }
};

template <class T>
struct Pending {
  T time;
  std::uint32_t agent;
};

template <class T>
struct Later {
  bool operator()(const Pending<T>& a, const Pending<T>& b) const {
    if (a.time == b.time) return a.agent > b.agent;
    return b.time < a.time;
  }
};

/// Returns the number of increments actually performed; observer returning false stops early.
template <class T, class Observer>
std::uint64_t run_embedded(const ProcessConfig& cfg, Observer&& observe, bool& absorbed) {
  const auto A = static_cast<std::uint32_t>(cfg.initial.size());
  const WaitingFamily& fam = *cfg.family;
  Rng rng(cfg.seed);
  std::vector<std::uint64_t> values = cfg.initial;
  std::uint64_t n = 0;
  for (auto v : values) n += v;
  const std::uint64_t stop = n + cfg.horizon;

  // Each agent holds exactly one pending absolute jump time.
  std::priority_queue<Pending<T>, std::vector<Pending<T>>, Later<T>> queue;
  for (std::uint32_t a = 0; a < A; ++a) queue.push({Clock<T>::draw(fam, values[a] + 1, rng), a});

  std::vector<std::uint32_t> group;
  std::uint64_t done = 0;
  while (n < stop) {
    const T now = queue.top().time;
    group.clear();
    while (!queue.empty() && queue.top().time == now) {
      const auto a = queue.top().agent;
      queue.pop();
      ++values[a];
      ++n;
      ++done;
      group.push_back(a);
      if (n > stop + cfg.max_group_overshoot) {
        throw ResourceError("tie group overshoots the horizon by more than " +
                            std::to_string(cfg.max_group_overshoot) + " (zero waiting times)");
      }
      const T wait = Clock<T>::draw(fam, values[a] + 1, rng);
      T next = now + wait;
      if constexpr (std::is_same_v<T, double>) {
        if (wait > 0.0 && next == now) absorbed = true;
      }
      queue.push({std::move(next), a});
    }
    const TimePoint tau(now);
    if (!observe(GroupEvent{n, tau, group, values})) break;
  }
  return done;
}

}  // namespace detail

/// Streams tie groups of the embedded process to `observe` (a callable
/// GroupEvent -> bool). Deterministic in (cfg, seed).
template <class Observer>
bool simulate_embedded_stream(const ProcessConfig& cfg, Observer&& observe) {
  validate(cfg);
  bool absorbed = false;
  if (cfg.horizon == 0) return false;
  if (cfg.mode == NumericMode::float_mode) {
    detail::run_embedded<double>(cfg, observe, absorbed);
  } else {
    detail::run_embedded<Dyadic>(cfg, observe, absorbed);
  }
  return absorbed;
}

inline Trajectory simulate_embedded(const ProcessConfig& cfg) {
  Trajectory traj;
  traj.initial_values = cfg.initial;
  traj.horizon = cfg.horizon;
  traj.mode = cfg.mode;
  traj.final_values = cfg.initial;
  traj.explosion_flag = simulate_embedded_stream(cfg, [&](const GroupEvent& e) {
    StepEvent ev{e.n, e.tau, {e.jump_set.begin(), e.jump_set.end()}, {e.values.begin(), e.values.end()}};
    bool distinct = false;
    for (auto a : ev.jump_set) distinct = distinct || a != ev.jump_set.front();
    if (distinct) ++traj.tie_count;
    traj.final_values = ev.values;
    traj.events.push_back(std::move(ev));
    return true;
  });
  return traj;
}

/// Streams a run into a proxy tracker without storing the trajectory.
inline EventProxies simulate_proxies(const ProcessConfig& cfg, double beta) {
  EventProxyTracker tracker(cfg.initial, cfg.horizon, beta);
  simulate_embedded_stream(cfg, [&](const GroupEvent& e) {
    tracker.observe(e.n, e.jump_set, e.values);
    return true;
  });
  return tracker.result();
}

}  // namespace cgp
