#pragma once

#include <algorithm>
#include <cstdint>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "cgp/classify/verdict.hpp"
#include "cgp/errors.hpp"
#include "cgp/families/law.hpp"
#include "cgp/numerics/series_eval.hpp"
#include "cgp/series/three_series.hpp"

namespace cgp {

struct ClassifyOptions {
  /// Truncation level for the three-series checks; verdicts do not depend on it.
  double C = 1.0;
  SeriesOptions series;
  /// How far past the initial-value threshold to look for an atomless term.
  std::uint64_t atomless_search = 1000;
};

inline Verdict classify_leadership(const WaitingFamily& fam, const ClassifyOptions& opts = {}) {
  Verdict v;
  v.event = Event::Leadership;
  v.evidence = symmetric_three_series_parts(fam, opts.C, opts.series);
  const auto combined = combine_reports(v.evidence);
  if (combined.status == SeriesStatus::ProvenConvergent) {
    v.outcome = Outcome::AlmostSurely;
    v.basis = "sum (X_j - X'_j) converges almost surely (three-series test, C=" + format_number(opts.C) + ")";
  } else if (combined.status == SeriesStatus::ProvenDivergent) {
    v.outcome = Outcome::AlmostNever;
    v.basis = "sum (X_j - X'_j) fails the three-series test (C=" + format_number(opts.C) + ")";
  } else {
    v.basis = "three-series verdict undetermined";
  }
  return v;
}

namespace detail {

inline std::uint64_t second_largest(std::span<const std::uint64_t> initial) {
  if (initial.size() < 2) throw PreconditionError("need at least two agents");
  std::vector<std::uint64_t> v(initial.begin(), initial.end());
  std::nth_element(v.begin(), v.begin() + 1, v.end(), std::greater<>());
  return v[1];
}

/// Either branch of the no-atom condition for the difference of two explosion
/// times: sum P(X_j != X'_j) diverges, or some j beyond every pairwise minimum
/// of initial values has diag(j) = 0.
struct NoAtomCheck {
  bool holds = false;
  std::string basis;
  std::vector<NamedReport> evidence;
};

inline NoAtomCheck no_atom_condition(const WaitingFamily& fam, std::span<const std::uint64_t> initial,
                                     const ClassifyOptions& opts) {
  NoAtomCheck out;
  const std::uint64_t threshold = second_largest(initial);
  for (std::uint64_t j = threshold + 1; j <= threshold + opts.atomless_search; ++j) {
    const Analytic d = fam.diag(j);
    if (d && *d == 0.0) {
      out.holds = true;
      out.basis = "P(X_j != X'_j) = 1 at j=" + std::to_string(j) + " > " + std::to_string(threshold);
      return out;
    }
  }
  const auto rep = analytic_series(
      [&](std::uint64_t j) -> Analytic {
        const Analytic d = fam.diag(j);
        if (!d) return std::nullopt;
        return 1.0 - *d;
      },
      fam.neq_certificate(), opts.series);
  out.evidence.push_back({"sum P(X_j != X'_j)", rep});
  if (rep.status == SeriesStatus::ProvenDivergent) {
    out.holds = true;
    out.basis = "sum P(X_j != X'_j) diverges";
  } else {
    out.basis = std::string("no atomless term past j=") + std::to_string(threshold) +
                " and sum P(X_j != X'_j) is " + to_string(rep.status);
  }
  return out;
}

}  // namespace detail

inline Verdict classify_monopoly(const WaitingFamily& fam, std::span<const std::uint64_t> initial,
                                 const ClassifyOptions& opts = {}) {
  Verdict v;
  v.event = Event::Monopoly;
  v.evidence = positive_series_parts(fam, opts.C, opts.series);
  const auto pos = combine_reports(v.evidence);
  if (pos.status == SeriesStatus::ProvenDivergent) {
    v.outcome = Outcome::AlmostNever;
    v.basis = "sum X_j diverges almost surely, so no agent explodes first";
    return v;
  }
  if (pos.status != SeriesStatus::ProvenConvergent) {
    v.basis = "convergence of sum X_j undetermined";
    return v;
  }
  auto cond = detail::no_atom_condition(fam, initial, opts);
  v.evidence.insert(v.evidence.end(), cond.evidence.begin(), cond.evidence.end());
  if (cond.holds) {
    v.outcome = Outcome::AlmostSurely;
    v.basis = "sum X_j converges and " + cond.basis;
  } else {
    v.basis = "sum X_j converges but " + cond.basis;
  }
  return v;
}

inline Verdict classify_strict(const WaitingFamily& fam, std::span<const std::uint64_t> initial,
                               std::vector<double> epsilon_grid = {0.01, 0.1, 1.0},
                               const ClassifyOptions& opts = {}) {
  Verdict v;
  v.event = Event::StrictLeadership;
  v.epsilon_grid = std::move(epsilon_grid);
  const Verdict lead = classify_leadership(fam, opts);
  v.evidence = lead.evidence;
  if (lead.outcome == Outcome::AlmostNever) {
    v.outcome = Outcome::AlmostNever;
    v.basis = "leadership fails almost surely";
    return v;
  }
  if (lead.outcome != Outcome::AlmostSurely) {
    v.basis = "leadership undetermined";
    return v;
  }
  auto cond = detail::no_atom_condition(fam, initial, opts);
  v.evidence.insert(v.evidence.end(), cond.evidence.begin(), cond.evidence.end());

  bool grid_ok = true;
  for (double eps : v.epsilon_grid) {
    if (!(eps > 0.0)) throw std::invalid_argument("epsilon grid must be positive");
    auto rep = detail::analytic_series([&](std::uint64_t j) { return fam.prob_gt(j, eps); },
                                       fam.gt_certificate(eps), opts.series);
    grid_ok = grid_ok && rep.status == SeriesStatus::ProvenConvergent;
    v.evidence.push_back({"sum P(X_j > " + format_number(eps) + ")", std::move(rep)});
  }
  const bool symbolic = fam.gt_summable_for_all_eps();
  if (!symbolic) {
    v.warnings.push_back("no symbolic bound for every epsilon; the grid is diagnostic only");
  } else if (!grid_ok) {
    v.warnings.push_back("symbolic all-epsilon claim not confirmed on the grid");
  }
  if (!cond.holds) {
    v.basis = "leadership holds but " + cond.basis;
    return v;
  }
  if (symbolic && grid_ok) {
    v.outcome = Outcome::AlmostSurely;
    v.basis = "leadership, " + cond.basis + ", and sum P(X_j > eps) < infinity for every eps";
  } else {
    v.basis = "leadership and " + cond.basis + ", but summability of P(X_j > eps) for all eps is not proven";
  }
  return v;
}

struct BallsBinsVerdicts {
  Verdict monopoly;
  Verdict strict;
};

/// Zero-one verdicts for the urn scheme: monopoly iff sum 1/F(j) < infinity,
/// strict leadership iff for every eta both sum P(F(j) <= eta) and
/// sum E[F(j)^-2; F(j) > eta] are finite.
inline BallsBinsVerdicts classify_ballsbins(const FeedbackFamily& fb, std::vector<double> eta_grid = {0.5, 1.0, 2.0},
                                            const SeriesOptions& series = {}) {
  BallsBinsVerdicts out;
  auto& mono = out.monopoly;
  mono.event = Event::Monopoly;
  auto mean = series_eval([&](std::uint64_t k) { return fb.m1inv(k - 1); }, fb.m1inv_certificate(), series);
  mono.evidence.push_back({"sum E[1/F(j)]", mean});
  if (mean.status == SeriesStatus::ProvenConvergent) {
    mono.outcome = Outcome::AlmostSurely;
    mono.basis = "sum E[1/F(j)] < infinity, so sum 1/F(j) < infinity almost surely";
  } else {
    auto low = series_eval([&](std::uint64_t k) { return fb.inv_lower(k - 1); }, fb.inv_lower_certificate(), series);
    mono.evidence.push_back({"sum essinf 1/F(j)", low});
    if (low.status == SeriesStatus::ProvenDivergent) {
      mono.outcome = Outcome::AlmostNever;
      mono.basis = "sum 1/F(j) diverges on every path";
    } else {
      mono.basis = "summability of 1/F(j) undetermined";
    }
  }

  auto& strict = out.strict;
  strict.event = Event::StrictLeadership;
  strict.eta_grid = std::move(eta_grid);
  bool all_convergent = true;
  bool any_divergent = false;
  for (double eta : strict.eta_grid) {
    if (!(eta > 0.0)) throw std::invalid_argument("eta grid must be positive");
    auto small = series_eval([&](std::uint64_t k) { return fb.p_leq(k - 1, eta); }, fb.small_certificate(eta), series);
    auto m2 = series_eval([&](std::uint64_t k) { return fb.m2inv(k - 1, eta); }, fb.m2inv_certificate(eta), series);
    for (const auto* r : {&small, &m2}) {
      all_convergent = all_convergent && r->status == SeriesStatus::ProvenConvergent;
      any_divergent = any_divergent || r->status == SeriesStatus::ProvenDivergent;
    }
    strict.evidence.push_back({"sum P(F(j) <= " + format_number(eta) + ")", std::move(small)});
    strict.evidence.push_back({"sum E[F(j)^-2; F(j) > " + format_number(eta) + "]", std::move(m2)});
  }
  if (any_divergent) {
    strict.outcome = Outcome::AlmostNever;
    strict.basis = "an eta-series diverges";
  } else if (all_convergent && fb.eta_summable_for_all()) {
    strict.outcome = Outcome::AlmostSurely;
    strict.basis = "both eta-series converge for every eta > 0";
  } else {
    strict.basis = "eta-series verdicts undetermined";
    if (!fb.eta_summable_for_all()) strict.warnings.push_back("no symbolic bound for every eta; grid is diagnostic");
  }
  return out;
}

}  // namespace cgp
