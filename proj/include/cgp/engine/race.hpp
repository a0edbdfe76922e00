#pragma once

#include <algorithm>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "cgp/errors.hpp"
#include "cgp/families/law.hpp"
#include "cgp/numerics/dyadic.hpp"
#include "cgp/series/three_series.hpp"

namespace cgp {

enum class RaceOutcome { Winner, Tie, TieWithinPrecision, Undetermined };

inline const char* to_string(RaceOutcome o) {
  switch (o) {
    case RaceOutcome::Winner: return "Winner";
    case RaceOutcome::Tie: return "Tie";
    case RaceOutcome::TieWithinPrecision: return "TieWithinPrecision";
    case RaceOutcome::Undetermined: return "Undetermined";
  }
  return "?";
}

struct SigmaBounds {
  Dyadic lower;
  Dyadic upper;
};

struct RaceResult {
  RaceOutcome outcome = RaceOutcome::Undetermined;
  std::optional<std::size_t> winner;
  std::vector<SigmaBounds> sigma;
  std::uint64_t depth = 0;
};

struct RaceOptions {
  std::uint64_t depth = 40;
  Dyadic precision = Dyadic::pow2(-36);
  std::uint64_t seed = 0;
  /// Set when the caller already proved convergence of sum X_j.
  bool skip_convergence_check = false;
};

namespace detail {

inline RaceResult separate(std::vector<SigmaBounds> sigma, std::uint64_t depth, const Dyadic& precision,
                           bool final) {
  RaceResult r;
  r.depth = depth;
  for (std::size_t a = 0; a < sigma.size(); ++a) {
    bool clear = true;
    for (std::size_t b = 0; b < sigma.size() && clear; ++b) {
      if (b != a && !(sigma[a].upper < sigma[b].lower)) clear = false;
    }
    if (clear) {
      r.outcome = RaceOutcome::Winner;
      r.winner = a;
      r.sigma = std::move(sigma);
      return r;
    }
  }
  if (final) {
    // Agents that could still attain the minimum.
    Dyadic min_upper = sigma.front().upper;
    for (const auto& s : sigma) min_upper = std::min(min_upper, s.upper);
    Dyadic lo = min_upper;
    Dyadic hi = min_upper;
    for (const auto& s : sigma) {
      if (s.lower <= min_upper) {
        lo = std::min(lo, s.lower);
        hi = std::max(hi, s.upper);
      }
    }
    if (hi - lo <= precision) r.outcome = RaceOutcome::TieWithinPrecision;
  }
  r.sigma = std::move(sigma);
  return r;
}

}  // namespace detail

/// Decides which agent's explosion time sigma(a) = sum_{j > v_a(0)} X^(a)_j is
/// smallest. Random lattice families are sampled exactly to the depth budget
/// and bracketed with the family's sure tail bound. For a deterministic family
/// the differences sigma(a) - sigma(b) are finite sums, so ties are exact.
inline RaceResult explosion_race(const WaitingFamily& fam, std::span<const std::uint64_t> initial,
                                 const RaceOptions& opts = {}) {
  if (initial.size() < 2) throw PreconditionError("need at least two agents");
  if (!opts.skip_convergence_check) {
    const auto rep = positive_series_check(fam, 1.0);
    if (rep.status != SeriesStatus::ProvenConvergent) {
      throw PreconditionError("explosion_race: sum X_j is not proven convergent for " + fam.canonical() + " (" +
                              rep.witness + ")");
    }
  }
  if (fam.support_kind() == SupportKind::atomless) {
    throw PreconditionError("explosion_race: exact sampling needs a lattice family");
  }
  const std::size_t A = initial.size();
  const std::uint64_t vmax = *std::max_element(initial.begin(), initial.end());

  if (fam.deterministic()) {
    Rng unused(0);
    std::vector<Dyadic> head(A);
    for (std::size_t a = 0; a < A; ++a) {
      for (std::uint64_t j = initial[a] + 1; j <= vmax; ++j) head[a] += fam.sample_exact(j, unused);
    }
    RaceResult r;
    r.depth = vmax;
    const Dyadic best = *std::min_element(head.begin(), head.end());
    std::size_t count = 0;
    for (std::size_t a = 0; a < A; ++a) {
      if (head[a] == best) {
        ++count;
        r.winner = a;
      }
    }
    // Shared tail beyond vmax is unknown in absolute terms; report offsets from it.
    for (std::size_t a = 0; a < A; ++a) r.sigma.push_back({head[a], head[a]});
    if (count == 1) {
      r.outcome = RaceOutcome::Winner;
    } else {
      r.outcome = RaceOutcome::Tie;
      r.winner.reset();
    }
    return r;
  }

  if (!fam.sure_tail_bound(opts.depth)) {
    throw PreconditionError("explosion_race: " + fam.canonical() + " has no sure tail bound");
  }
  Rng rng(opts.seed);
  std::vector<Dyadic> partial(A);
  for (std::uint64_t J = 1; J <= std::max(opts.depth, vmax); ++J) {
    for (std::size_t a = 0; a < A; ++a) {
      if (J > initial[a]) partial[a] += fam.sample_exact(J, rng);
    }
    if (J < vmax) continue;
    const auto tail = fam.sure_tail_bound(J);
    if (!tail) continue;
    std::vector<SigmaBounds> sigma;
    for (std::size_t a = 0; a < A; ++a) sigma.push_back({partial[a], partial[a] + *tail});
    const bool last = J >= std::max(opts.depth, vmax);
    auto r = detail::separate(std::move(sigma), J, opts.precision, last);
    if (r.outcome == RaceOutcome::Winner || last) return r;
  }
  return {};
}

/// Per-agent families; bounds come from each family's sure tail bound.
inline RaceResult explosion_race(std::span<const WaitingFamilyPtr> families, std::span<const std::uint64_t> initial,
                                 const RaceOptions& opts = {}) {
  if (families.size() != initial.size() || families.size() < 2) {
    throw PreconditionError("explosion_race: one family per agent, at least two agents");
  }
  for (const auto& f : families) {
    if (!opts.skip_convergence_check && positive_series_check(*f, 1.0).status != SeriesStatus::ProvenConvergent) {
      throw PreconditionError("explosion_race: sum X_j is not proven convergent for " + f->canonical());
    }
  }
  const std::size_t A = initial.size();
  Rng rng(opts.seed);
  std::vector<Dyadic> partial(A);
  const std::uint64_t vmax = *std::max_element(initial.begin(), initial.end());
  const std::uint64_t last_depth = std::max(opts.depth, vmax);
  for (std::uint64_t J = 1; J <= last_depth; ++J) {
    std::vector<SigmaBounds> sigma;
    bool bounded = true;
    for (std::size_t a = 0; a < A; ++a) {
      if (J > initial[a]) partial[a] += families[a]->sample_exact(J, rng);
      const auto tail = families[a]->sure_tail_bound(J);
      if (!tail) {
        bounded = false;
        continue;
      }
      sigma.push_back({partial[a], partial[a] + *tail});
    }
    if (!bounded || J < vmax) continue;
    auto r = detail::separate(std::move(sigma), J, opts.precision, J == last_depth);
    if (r.outcome == RaceOutcome::Winner || J == last_depth) return r;
  }
  return {};
}

}  // namespace cgp
