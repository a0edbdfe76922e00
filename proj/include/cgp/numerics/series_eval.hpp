#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <limits>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>

#include "cgp/numerics/summation.hpp"

namespace cgp {

enum class SeriesStatus { ProvenConvergent, ProvenDivergent, Undetermined };

inline const char* to_string(SeriesStatus s) {
  switch (s) {
    case SeriesStatus::ProvenConvergent: return "ProvenConvergent";
    case SeriesStatus::ProvenDivergent: return "ProvenDivergent";
    case SeriesStatus::Undetermined: return "Undetermined";
  }
  return "?";
}

/// Upper bound on sum_{j>J} term(j), as a function of J. Empty when absent.
using TailBound = std::function<double(std::uint64_t)>;

/// Divergence witness: term(j) >= coeff * (j + shift)^(-power) for all j >= from.
/// Only power <= 1 is accepted, where the comparison series is known to diverge.
struct PowerMinorant {
  double coeff = 0.0;
  double shift = 0.0;
  double power = 1.0;
  std::uint64_t from = 1;

  [[nodiscard]] double operator()(std::uint64_t j) const {
    return coeff * std::pow(static_cast<double>(j) + shift, -power);
  }
  [[nodiscard]] std::string describe() const {
    std::ostringstream os;
    os << coeff << "*(j+" << shift << ")^-" << power << " for j>=" << from;
    return os.str();
  }
};

/// Proof material for one nonnegative series: an optional tail bound and an
/// optional divergent minorant. Families hand these out; series_eval checks them.
struct SeriesCertificate {
  TailBound tail_bound;
  std::optional<PowerMinorant> minorant;
  std::string note;
};

struct ConvergenceReport {
  SeriesStatus status = SeriesStatus::Undetermined;
  double partial_value = 0.0;
  std::uint64_t truncation_index = 0;
  /// Valid upper bound on omitted mass plus summation error when convergent.
  double tail_bound = std::numeric_limits<double>::infinity();
  std::string witness;
};

struct SeriesOptions {
  /// Convergence is reported once the enclosure width drops to this level.
  /// Infinity means any finite tail bound suffices.
  double tolerance = std::numeric_limits<double>::infinity();
  /// Terms summed before the first tail-bound check.
  std::uint64_t min_terms = 1024;
  std::uint64_t max_terms = std::uint64_t{1} << 31;
  /// Prefix length over which a minorant is spot-checked against the terms.
  std::uint64_t minorant_checks = 4096;
};

/// Decides a nonnegative series sum_{j>=1} term(j) from caller-supplied proof
/// obligations. Numeric summation alone never yields a verdict.
template <class Term>
ConvergenceReport series_eval(Term&& term, const TailBound& tail_bound,
                              const std::optional<PowerMinorant>& minorant,
                              const SeriesOptions& opts = {}) {
  ConvergenceReport report;
  NeumaierAccumulator acc;

  auto take = [&](std::uint64_t j) {
    const double t = term(j);
    if (std::isnan(t) || t < 0.0) {
      throw std::invalid_argument("series_eval: negative or NaN term at j=" + std::to_string(j));
    }
    return t;
  };

  if (minorant) {
    if (!(minorant->coeff > 0.0) || minorant->power > 1.0 || minorant->from < 1 ||
        static_cast<double>(minorant->from) + minorant->shift <= 0.0) {
      throw std::invalid_argument("series_eval: minorant is not a divergent p-series form");
    }
    const std::uint64_t checks = opts.minorant_checks;
    for (std::uint64_t j = 1; j <= minorant->from + checks - 1; ++j) {
      const double t = take(j);
      if (std::isinf(t)) {
        report.status = SeriesStatus::ProvenDivergent;
        report.partial_value = t;
        report.truncation_index = j;
        report.witness = "infinite term at j=" + std::to_string(j);
        return report;
      }
      if (j >= minorant->from) {
        const double m = (*minorant)(j);
        if (t < m * (1.0 - 1e-12)) {
          report.status = SeriesStatus::Undetermined;
          report.witness = "minorant violated at j=" + std::to_string(j);
          report.partial_value = acc.value();
          report.truncation_index = j - 1;
          return report;
        }
      }
      acc.add(t);
    }
    if (tail_bound) {
      const double tb = tail_bound(acc.count());
      if (std::isfinite(tb)) {
        throw std::logic_error("series_eval: conflicting certificates (finite tail bound and divergent minorant)");
      }
    }
    report.status = SeriesStatus::ProvenDivergent;
    report.partial_value = acc.value();
    report.truncation_index = acc.count();
    report.witness = "minorant " + minorant->describe();
    return report;
  }

  if (!tail_bound) {
    for (std::uint64_t j = 1; j <= opts.min_terms; ++j) {
      const double t = take(j);
      if (std::isinf(t)) {
        report.status = SeriesStatus::ProvenDivergent;
        report.partial_value = t;
        report.truncation_index = j;
        report.witness = "infinite term at j=" + std::to_string(j);
        return report;
      }
      acc.add(t);
    }
    report.partial_value = acc.value();
    report.truncation_index = acc.count();
    report.witness = "no tail bound supplied";
    return report;
  }

  std::uint64_t checkpoint = std::max<std::uint64_t>(1, opts.min_terms);
  double last_bound = std::numeric_limits<double>::infinity();
  for (std::uint64_t j = 1;; ++j) {
    const double t = take(j);
    if (std::isinf(t)) {
      report.status = SeriesStatus::ProvenDivergent;
      report.partial_value = t;
      report.truncation_index = j;
      report.witness = "infinite term at j=" + std::to_string(j);
      return report;
    }
    acc.add(t);
    if (j == checkpoint || j == opts.max_terms) {
      const double tb = tail_bound(j);
      if (std::isnan(tb) || tb < 0.0) throw std::invalid_argument("series_eval: invalid tail bound");
      const double enclosure = tb + acc.error_bound();
      last_bound = enclosure;
      if (std::isfinite(enclosure) && enclosure <= opts.tolerance) {
        report.status = SeriesStatus::ProvenConvergent;
        report.partial_value = acc.value();
        report.truncation_index = j;
        report.tail_bound = enclosure;
        std::ostringstream os;
        os << "tail bound " << tb << " at J=" << j;
        report.witness = os.str();
        return report;
      }
      if (j >= opts.max_terms) break;
      checkpoint = std::min(opts.max_terms, checkpoint * 2);
    }
  }
  report.partial_value = acc.value();
  report.truncation_index = acc.count();
  report.tail_bound = last_bound;
  std::ostringstream os;
  os << "tail bound " << last_bound << " above tolerance " << opts.tolerance << " at J=" << acc.count();
  report.witness = os.str();
  return report;
}

template <class Term>
ConvergenceReport series_eval(Term&& term, const SeriesCertificate& cert, const SeriesOptions& opts = {}) {
  auto r = series_eval(std::forward<Term>(term), cert.tail_bound, cert.minorant, opts);
  if (!cert.note.empty()) r.witness += " [" + cert.note + "]";
  return r;
}

}  // namespace cgp
