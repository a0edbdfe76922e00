#pragma once

#include <cstdint>
#include <random>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "cgp/engine/simulate.hpp"
#include "cgp/engine/trajectory.hpp"
#include "cgp/errors.hpp"
#include "cgp/families/law.hpp"

namespace cgp {

/// Balls-in-bins chain: urn a is picked with probability F_a(u_a) / sum_b F_b(u_b).
/// F_a(u) is drawn once, on first need, and cached per (agent, value).
template <class Observer>
void simulate_ballsbins_stream(const FeedbackFamily& fb, std::span<const std::uint64_t> initial, std::uint64_t horizon,
                               std::uint64_t seed, Observer&& observe) {
  if (initial.size() < 2) throw PreconditionError("need at least two urns");
  for (auto u : initial) {
    if (u < 1) throw PreconditionError("urns start with at least one ball");
  }
  const std::size_t A = initial.size();
  Rng rng(seed);
  std::vector<std::uint64_t> u(initial.begin(), initial.end());
  std::vector<std::vector<double>> cache(A);
  auto feedback = [&](std::size_t a) {
    auto& c = cache[a];
    while (c.size() <= u[a]) {
      const std::uint64_t j = c.size();
      const double F = fb.sample_F(j, rng);
      if (!(F > 0.0) && j >= initial[a]) {
        throw std::domain_error("nonpositive feedback F(" + std::to_string(j) + ") = " + std::to_string(F));
      }
      c.push_back(F);
    }
    return c[u[a]];
  };

  std::uint64_t n = 0;
  for (auto v : u) n += v;
  std::vector<double> w(A);
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  std::uint32_t picked[1];
  for (std::uint64_t step = 0; step < horizon; ++step) {
    double total = 0.0;
    for (std::size_t a = 0; a < A; ++a) total += (w[a] = feedback(a));
    double x = unif(rng) * total;
    std::size_t a = 0;
    while (a + 1 < A && x >= w[a]) x -= w[a++];
    ++u[a];
    ++n;
    picked[0] = static_cast<std::uint32_t>(a);
    const TimePoint tau(static_cast<double>(step + 1));
    if (!observe(GroupEvent{n, tau, std::span<const std::uint32_t>(picked, 1), u})) return;
  }
}

/// Trajectory of the discrete chain; tau is the step index.
inline Trajectory simulate_ballsbins(const FeedbackFamily& fb, std::span<const std::uint64_t> initial,
                                     std::uint64_t horizon, std::uint64_t seed) {
  Trajectory traj;
  traj.initial_values.assign(initial.begin(), initial.end());
  traj.horizon = horizon;
  traj.final_values = traj.initial_values;
  simulate_ballsbins_stream(fb, initial, horizon, seed, [&](const GroupEvent& e) {
    traj.events.push_back({e.n, e.tau, {e.jump_set.begin(), e.jump_set.end()}, {e.values.begin(), e.values.end()}});
    traj.final_values = traj.events.back().values;
    return true;
  });
  return traj;
}

/// Exact probability that the chain's first picks are `picks`.
inline BigRational chain_prefix_prob(const FeedbackFamily& fb, std::span<const std::uint64_t> initial,
                                     std::span<const std::uint32_t> picks) {
  if (!fb.deterministic()) throw PreconditionError("chain_prefix_prob needs deterministic feedback");
  std::vector<std::uint64_t> u(initial.begin(), initial.end());
  auto f = [&](std::uint64_t j) { return Dyadic::from_double(*fb.value(j)).to_rational(); };
  BigRational p(1);
  for (auto a : picks) {
    if (a >= u.size()) throw std::out_of_range("pick names a nonexistent urn");
    BigRational total(0);
    for (auto v : u) total += f(v);
    p *= f(u[a]) / total;
    ++u[a];
  }
  return p;
}

}  // namespace cgp
