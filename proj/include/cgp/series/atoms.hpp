#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <map>
#include <string>
#include <vector>

#include "cgp/errors.hpp"
#include "cgp/families/law.hpp"
#include "cgp/numerics/series_eval.hpp"
#include "cgp/series/three_series.hpp"

namespace cgp {

enum class AtomAnswer { Yes, No, Undetermined };

inline const char* to_string(AtomAnswer a) {
  switch (a) {
    case AtomAnswer::Yes: return "Yes";
    case AtomAnswer::No: return "No";
    case AtomAnswer::Undetermined: return "Undetermined";
  }
  return "?";
}

struct AtomVerdict {
  AtomAnswer has_atom = AtomAnswer::Undetermined;
  std::string reason;
  /// The sum_j P(Y_j != Y'_j) evaluation, when it was attempted.
  std::optional<ConvergenceReport> neq_series;
  /// Index with diag(j) = 0, when one was found.
  std::optional<std::uint64_t> atomless_index;
};

/// Atom criterion for a convergent series of independent terms: there is an
/// atom iff every term has one and sum_j P(Y_j != Y'_j) < infinity.
/// Convergence of sum Y_j itself is the caller's responsibility.
inline AtomVerdict atom_criterion(const IndexedLaw& law, std::uint64_t diag_scan = 4096,
                                  const SeriesOptions& opts = {}) {
  AtomVerdict v;
  for (std::uint64_t j = 1; j <= diag_scan; ++j) {
    const Analytic d = law.diag(j);
    if (!d) {
      v.reason = "diag unknown at j=" + std::to_string(j);
      return v;
    }
    if (*d <= 0.0) {
      v.has_atom = AtomAnswer::No;
      v.atomless_index = j;
      v.reason = "term j=" + std::to_string(j) + " is atomless (diag = 0)";
      return v;
    }
  }
  const auto rep = detail::analytic_series(
      [&](std::uint64_t j) -> Analytic {
        const Analytic d = law.diag(j);
        if (!d) return std::nullopt;
        return 1.0 - *d;
      },
      law.neq_certificate(), opts);
  v.neq_series = rep;
  if (rep.status == SeriesStatus::ProvenDivergent) {
    v.has_atom = AtomAnswer::No;
    v.reason = "sum P(Y != Y') diverges: " + rep.witness;
    return v;
  }
  if (rep.status == SeriesStatus::ProvenConvergent) {
    // Beyond the scanned prefix, 1 - diag(j) <= tail bound < 1 keeps every diag positive.
    if (rep.truncation_index <= diag_scan && rep.tail_bound < 1.0) {
      v.has_atom = AtomAnswer::Yes;
      v.reason = "all diag > 0 and sum P(Y != Y') converges: " + rep.witness;
    } else {
      v.reason = "sum P(Y != Y') converges but positivity of diag beyond the scan is not certified";
    }
    return v;
  }
  v.reason = "sum P(Y != Y') undetermined: " + rep.witness;
  return v;
}

struct AtomInterval {
  /// Value of the truncated sum S_J; the matching atom of the full sum sits at
  /// location + sum_{j>J} anchor(j).
  Dyadic location;
  /// P(S_J = location) from the listed atoms, before pruning losses.
  double partial_mass = 0.0;
  double mass_lower = 0.0;
  double mass_upper = 0.0;
};

struct AtomReport {
  std::uint64_t depth = 0;
  std::vector<AtomInterval> atoms;  // sorted by location
  /// Bound on P(some j > J has Y_j != anchor(j)) plus unlisted support mass.
  double tail_mass = 0.0;
  double pruned_mass = 0.0;
  /// Upper bound on the largest atom of the full sum.
  double max_atom_upper = 0.0;
  std::optional<std::uint64_t> atomless_index;
};

struct BruteforceOptions {
  /// Atoms of each Y_j lighter than this are not listed (their mass is tracked).
  double mass_cutoff = 1e-15;
  /// States of S_j lighter than this are dropped after each convolution step.
  double prune_below = 0.0;
  std::size_t state_budget = std::size_t{1} << 20;
};

/// Exact convolution of S_J = Y_1 + ... + Y_J in dyadic arithmetic, with
/// interval masses for the full sum.
///
/// Lower bound: P(S_J = x) * P(no later term leaves its anchor).
/// Upper bound: P(S_J = x) + P(some later term moves) * max_z P(S_J = z),
/// capped by the largest atom of S_J, which no independent addition can raise.
inline AtomReport atom_bruteforce(const IndexedLaw& law, std::uint64_t depth, const BruteforceOptions& opts = {}) {
  AtomReport rep;
  rep.depth = depth;
  std::map<Dyadic, double> dist{{Dyadic{}, 1.0}};
  double residual = 0.0;

  for (std::uint64_t j = 1; j <= depth; ++j) {
    const auto support = law.atoms(j, opts.mass_cutoff);
    if (!support) throw PreconditionError(law.canonical() + ": no finite support listing at j=" + std::to_string(j));
    if (support->empty()) {
      rep.atomless_index = j;
      rep.tail_mass = 1.0;
      rep.max_atom_upper = 0.0;
      return rep;
    }
    double listed = 0.0;
    for (const auto& a : *support) listed += a.mass;
    residual += std::max(0.0, 1.0 - listed);

    std::map<Dyadic, double> next;
    for (const auto& [x, m] : dist) {
      for (const auto& a : *support) {
        next[x + a.value] += m * a.mass;
        if (next.size() > opts.state_budget) {
          throw ResourceError("atom_bruteforce: more than " + std::to_string(opts.state_budget) +
                              " support points at j=" + std::to_string(j));
        }
      }
    }
    if (opts.prune_below > 0.0) {
      for (auto it = next.begin(); it != next.end();) {
        if (it->second < opts.prune_below) {
          rep.pruned_mass += it->second;
          it = next.erase(it);
        } else {
          ++it;
        }
      }
    }
    dist = std::move(next);
  }

  constexpr double u = std::numeric_limits<double>::epsilon() / 2;
  const double rounding = 4.0 * static_cast<double>(depth + 1) * u;
  const auto dev_bound = law.anchor_deviation_bound();
  const double deviation = dev_bound ? dev_bound(depth) : std::numeric_limits<double>::infinity();
  rep.tail_mass = deviation + residual;

  double listed_max = 0.0;
  for (const auto& [x, m] : dist) listed_max = std::max(listed_max, m);
  const double lost = rep.pruned_mass + residual;
  rep.max_atom_upper = std::min(1.0, (listed_max + lost) * (1.0 + rounding));

  const double keep = std::isfinite(rep.tail_mass) ? std::max(0.0, 1.0 - rep.tail_mass) : 0.0;
  rep.atoms.reserve(dist.size());
  for (const auto& [x, m] : dist) {
    AtomInterval a;
    a.location = x;
    a.partial_mass = m;
    a.mass_lower = std::max(0.0, m * keep * (1.0 - rounding));
    const double spill = std::isfinite(rep.tail_mass) ? rep.tail_mass * rep.max_atom_upper : rep.max_atom_upper;
    a.mass_upper = std::min(rep.max_atom_upper, (m + lost) * (1.0 + rounding) + spill);
    rep.atoms.push_back(std::move(a));
  }
  return rep;
}

}  // namespace cgp
