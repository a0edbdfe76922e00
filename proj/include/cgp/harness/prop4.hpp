#pragma once

#include <cmath>
#include <cstdint>
#include <limits>
#include <vector>

#include "cgp/engine/race.hpp"
#include "cgp/engine/simulate.hpp"
#include "cgp/families/counter.hpp"
#include "cgp/harness/mc.hpp"
#include "cgp/harness/parallel.hpp"
#include "cgp/harness/seeds.hpp"
#include "cgp/numerics/product.hpp"

namespace cgp {

/// Rigorous lower bounds for the two-agent counterexamples started at (0, 0):
/// the two-point counter (monopoly) and the geometric counter (strict leadership).
struct Prop4Bounds {
  ProductBounds two_point_all_top;  // prod_{j>=1} (1 - 1/(j+1)^2)
  ProductBounds geometric_all_tied; // prod_{j>=1} (1 - 2/((j+1)^2 + 1))
  double monopoly_complement_lower = 0.0;
  double slead_complement_lower = 0.0;
  /// Bound for one named agent; the union over agents is at least this.
  double mon_lower = 0.0;
  double slead_lower = 0.0;
};

namespace detail {

inline double down(double x) { return std::nextafter(x, 0.0); }

}  // namespace detail

inline Prop4Bounds prop4_bounds(const ProductOptions& opts = {.target_width = 1e-6}) {
  Prop4Bounds b;
  // sum_{j>J} 1/(j+1)^2 <= 1/(J+1) by telescoping 1/(k(k-1)).
  b.two_point_all_top = infinite_product([](std::uint64_t j) { return TwoPointCounter::q(j); },
                                         [](std::uint64_t J) { return 1.0 / (static_cast<double>(J) + 1.0); }, opts);
  // P(X_j != X'_j) = 2/((j+1)^2 + 1) <= 2/(j+1)^2, so the tail is at most 2/(J+1).
  b.geometric_all_tied = infinite_product(
      [](std::uint64_t j) {
        const double k = static_cast<double>(j) + 1.0;
        return 2.0 / (k * k + 1.0);
      },
      [](std::uint64_t J) { return 2.0 / (static_cast<double>(J) + 1.0); }, opts);

  const double l = b.two_point_all_top.lower;
  // No monopoly when both agents take the top value at every j >= 1.
  b.monopoly_complement_lower = detail::down(l * l);
  // Agent 1 takes 0 at j = 1 (prob 1/4) and the top value after; agent 2 always
  // takes the top value. prod_{j>=2} = l / (3/4), so the bound is l^2 / 3.
  b.mon_lower = detail::down(detail::down(l * l) / 3.0);

  const double g = b.geometric_all_tied.lower;
  // No strict leader when the two sequences agree everywhere.
  b.slead_complement_lower = g;
  // X_1 < X'_1 has probability (1 - 3/5)/2 = 1/5 and prod_{j>=2} = g / (3/5).
  b.slead_lower = detail::down(g / 3.0);
  return b;
}

struct Prop4Estimates {
  MCEstimate monopoly;        // two-point counter, explosion race winner
  MCEstimate strict;          // geometric counter, strict-leadership proxy
  std::uint64_t unresolved_races = 0;  // TieWithinPrecision or Undetermined, counted as no monopoly
};

struct Prop4Options {
  std::uint64_t replications = 10000;
  std::uint64_t seed = 0;
  std::uint64_t depth = 40;
  std::uint64_t geometric_horizon = 80;
  double beta = 0.5;
  unsigned workers = 1;
};

inline Prop4Estimates prop4_monte_carlo(const Prop4Options& opts = {}) {
  const std::vector<std::uint64_t> start{0, 0};
  const auto two_point = std::make_shared<TwoPointCounter>();
  const auto geometric = std::make_shared<GeometricCounter>();

  std::vector<RaceOutcome> race(opts.replications);
  std::vector<char> strict(opts.replications);
  RaceOptions ro;
  ro.depth = opts.depth;
  ro.precision = Dyadic::pow2(2 - static_cast<long long>(opts.depth));
  ro.skip_convergence_check = positive_series_check(*two_point).status == SeriesStatus::ProvenConvergent;
  if (!ro.skip_convergence_check) throw PreconditionError("two-point counter: sum X_j not proven convergent");

  parallel_for(opts.replications, opts.workers, [&](std::size_t i) {
    RaceOptions r = ro;
    r.seed = derive_seed(opts.seed, 0, i);
    race[i] = explosion_race(*two_point, start, r).outcome;

    ProcessConfig cfg;
    cfg.initial = start;
    cfg.family = geometric;
    cfg.horizon = opts.geometric_horizon;
    cfg.mode = NumericMode::exact_dyadic;
    cfg.seed = derive_seed(opts.seed, 1, i);
    strict[i] = run_replication(cfg, opts.beta).proxies.strict_leader_stable ? 1 : 0;
  });

  Prop4Estimates out;
  std::uint64_t wins = 0;
  std::uint64_t slead = 0;
  for (std::size_t i = 0; i < race.size(); ++i) {
    if (race[i] == RaceOutcome::Winner) ++wins;
    if (race[i] == RaceOutcome::TieWithinPrecision || race[i] == RaceOutcome::Undetermined) ++out.unresolved_races;
    slead += static_cast<std::uint64_t>(strict[i]);
  }
  out.monopoly = make_estimate("monopoly", opts.depth, wins, opts.replications, opts.seed);
  out.strict = make_estimate("strict_leadership", opts.geometric_horizon, slead, opts.replications, opts.seed);
  return out;
}

}  // namespace cgp
