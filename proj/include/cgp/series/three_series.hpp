#pragma once

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>
#include <vector>

#include "cgp/families/law.hpp"
#include "cgp/numerics/series_eval.hpp"

namespace cgp {

/// One named series and its verdict, kept for evidence chains.
struct NamedReport {
  std::string name;
  ConvergenceReport report;
};

namespace detail {

struct UnknownAnalytic {
  std::uint64_t j;
};

/// Evaluates a series whose terms come from an analytic callback; an unknown
/// term anywhere in the evaluated range turns the verdict into Undetermined.
template <class Callback>
ConvergenceReport analytic_series(Callback&& cb, const SeriesCertificate& cert, const SeriesOptions& opts) {
  auto term = [&](std::uint64_t j) {
    const Analytic v = cb(j);
    if (!v) throw UnknownAnalytic{j};
    return std::max(0.0, *v);
  };
  try {
    return series_eval(term, cert, opts);
  } catch (const UnknownAnalytic& u) {
    ConvergenceReport r;
    r.witness = "analytic unknown at j=" + std::to_string(u.j);
    return r;
  }
}

inline void require_truncation(double C) {
  if (!(C > 0.0) || std::isnan(C)) throw std::invalid_argument("truncation level C must be positive");
}

}  // namespace detail

/// Convergent iff every part is; divergent as soon as one part is.
inline ConvergenceReport combine_reports(const std::vector<NamedReport>& parts) {
  ConvergenceReport out;
  bool all_convergent = !parts.empty();
  bool any_divergent = false;
  out.tail_bound = 0.0;
  for (const auto& p : parts) {
    all_convergent = all_convergent && p.report.status == SeriesStatus::ProvenConvergent;
    any_divergent = any_divergent || p.report.status == SeriesStatus::ProvenDivergent;
    out.partial_value += p.report.partial_value;
    out.truncation_index = std::max(out.truncation_index, p.report.truncation_index);
    out.tail_bound += p.report.tail_bound;
    if (!out.witness.empty()) out.witness += "; ";
    out.witness += p.name + ": " + to_string(p.report.status) + " (" + p.report.witness + ")";
  }
  if (any_divergent) {
    out.status = SeriesStatus::ProvenDivergent;
  } else if (all_convergent) {
    out.status = SeriesStatus::ProvenConvergent;
  }
  if (out.status != SeriesStatus::ProvenConvergent) out.tail_bound = std::numeric_limits<double>::infinity();
  return out;
}

/// The tail and truncated-second-moment series of X_j - X'_j; the mean series
/// vanishes by symmetry.
inline std::vector<NamedReport> symmetric_three_series_parts(const WaitingFamily& fam, double C,
                                                             const SeriesOptions& opts = {}) {
  detail::require_truncation(C);
  std::vector<NamedReport> out;
  out.push_back({"sum P(|X-X'|>C)",
                 detail::analytic_series([&](std::uint64_t j) { return fam.sym_tail(j, C); },
                                         fam.sym_tail_certificate(C), opts)});
  out.push_back({"sum E[(X-X')^2;|X-X'|<=C]",
                 detail::analytic_series([&](std::uint64_t j) { return fam.sym_m2(j, C); },
                                         fam.sym_m2_certificate(C), opts)});
  return out;
}

inline ConvergenceReport symmetric_three_series(const WaitingFamily& fam, double C = 1.0,
                                                const SeriesOptions& opts = {}) {
  return combine_reports(symmetric_three_series_parts(fam, C, opts));
}

/// For nonnegative terms the variance series is implied by the other two.
inline std::vector<NamedReport> positive_series_parts(const WaitingFamily& fam, double C,
                                                      const SeriesOptions& opts = {}) {
  detail::require_truncation(C);
  std::vector<NamedReport> out;
  out.push_back({"sum P(X>C)", detail::analytic_series([&](std::uint64_t j) { return fam.tail(j, C); },
                                                      fam.tail_certificate(C), opts)});
  out.push_back({"sum E[X;X<=C]", detail::analytic_series([&](std::uint64_t j) { return fam.trunc_mean(j, C); },
                                                         fam.trunc_mean_certificate(C), opts)});
  return out;
}

inline ConvergenceReport positive_series_check(const WaitingFamily& fam, double C = 1.0,
                                               const SeriesOptions& opts = {}) {
  return combine_reports(positive_series_parts(fam, C, opts));
}

}  // namespace cgp
