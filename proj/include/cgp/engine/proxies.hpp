#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <optional>
#include <span>
#include <stdexcept>
#include <vector>

namespace cgp {

/// Finite-horizon stand-ins for the leadership, strict leadership and
/// monopoly tail events, evaluated on the window of the last ceil(beta N) steps.
struct EventProxies {
  double window = 0.5;
  std::uint64_t window_start = 0;  // steps n > window_start form the window
  bool leader_stable = false;
  bool strict_leader_stable = false;
  bool monopoly_proxy = false;
  /// Latest step with at least two agents sharing the maximum (initial state counts as step n0).
  std::uint64_t last_tie_step = 0;
  /// Latest step at which the lowest-index maximizer changed.
  std::uint64_t last_lead_change_step = 0;
  /// Latest step at which an agent other than the final leader jumped.
  std::uint64_t last_loser_jump_step = 0;
  bool tie_in_window = false;
};

/// Streaming evaluation of EventProxies over tie-group events.
///
/// Monopoly is read as "one agent made every window jump while being the
/// unique maximizer throughout", so the three proxies nest by construction.
class EventProxyTracker {
 public:
  EventProxyTracker(std::span<const std::uint64_t> initial, std::uint64_t horizon, double beta)
      : values_(initial.begin(), initial.end()), last_jump_(initial.size(), 0), candidates_(initial.size(), true) {
    if (!(beta > 0.0 && beta < 1.0)) throw std::invalid_argument("window fraction beta must lie in (0, 1)");
    if (initial.size() < 2) throw std::invalid_argument("need at least two agents");
    std::uint64_t n0 = 0;
    for (auto v : initial) n0 += v;
    out_.window = beta;
    const auto width = static_cast<std::uint64_t>(std::ceil(beta * static_cast<double>(horizon)));
    out_.window_start = n0 + horizon - std::min(width, horizon);
    leader_ = lowest_argmax(values_, top_count_);
    if (top_count_ >= 2) out_.last_tie_step = n0;
  }

  /// values are the post-group values; jump_set lists jumping agents (with multiplicity).
  void observe(std::uint64_t n, std::span<const std::uint32_t> jump_set, std::span<const std::uint64_t> values) {
    values_.assign(values.begin(), values.end());
    for (auto a : jump_set) last_jump_[a] = n;

    std::size_t count = 0;
    const std::size_t leader = lowest_argmax(values_, count);
    if (count >= 2) out_.last_tie_step = n;
    if (leader != leader_) out_.last_lead_change_step = n;
    leader_ = leader;

    if (n <= out_.window_start) return;
    ++window_events_;
    const std::uint64_t top = values_[leader];
    for (std::size_t a = 0; a < values_.size(); ++a) {
      if (values_[a] != top) candidates_[a] = false;
    }
    if (count != 1) strict_ok_ = false;
    if (window_events_ == 1) strict_agent_ = leader;
    if (leader != strict_agent_) strict_ok_ = false;
    for (auto a : jump_set) {
      if (!jumper_) {
        jumper_ = a;
      } else if (*jumper_ != a) {
        single_jumper_ = false;
      }
    }
  }

  [[nodiscard]] EventProxies result() const {
    EventProxies out = out_;
    const bool any_window = window_events_ > 0;
    out.leader_stable = any_window && std::any_of(candidates_.begin(), candidates_.end(), [](bool b) { return b; });
    out.strict_leader_stable = any_window && strict_ok_;
    out.monopoly_proxy = out.strict_leader_stable && single_jumper_ && jumper_ && *jumper_ == strict_agent_;
    out.tie_in_window = out.last_tie_step > out.window_start;
    std::uint64_t loser = 0;
    for (std::size_t a = 0; a < last_jump_.size(); ++a) {
      if (a != leader_) loser = std::max(loser, last_jump_[a]);
    }
    out.last_loser_jump_step = loser;
    return out;
  }

 private:
  static std::size_t lowest_argmax(const std::vector<std::uint64_t>& v, std::size_t& count) {
    std::size_t best = 0;
    count = 1;
    for (std::size_t a = 1; a < v.size(); ++a) {
      if (v[a] > v[best]) {
        best = a;
        count = 1;
      } else if (v[a] == v[best]) {
        ++count;
      }
    }
    return best;
  }

  EventProxies out_;
  std::vector<std::uint64_t> values_;
  std::vector<std::uint64_t> last_jump_;
  std::vector<bool> candidates_;
  std::size_t leader_ = 0;
  std::size_t top_count_ = 0;
  std::uint64_t window_events_ = 0;
  bool strict_ok_ = true;
  std::size_t strict_agent_ = 0;
  std::optional<std::uint32_t> jumper_;
  bool single_jumper_ = true;
};

}  // namespace cgp
