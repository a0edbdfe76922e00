#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <stdexcept>
#include <string>

#include "cgp/numerics/series_eval.hpp"
#include "cgp/numerics/summation.hpp"

namespace cgp {

/// Enclosure [lower, upper] of prod_{j>=1} (1 - q_j).
struct ProductBounds {
  double lower = 0.0;
  double upper = 1.0;
  std::uint64_t truncation_index = 0;
  double tail_bound = std::numeric_limits<double>::infinity();
};

struct ProductOptions {
  /// Stop once upper - lower is at most this.
  double target_width = 1e-12;
  std::uint64_t min_terms = 64;
  std::uint64_t max_terms = std::uint64_t{1} << 31;
};

namespace detail {

struct LogTerm {
  double value;  // approximation of log(1 - q)
  double error;  // bound on |value - log(1 - q)|
};

/// log(1 - q) with an absolute error bound. Small q uses a four-term series
/// whose remainder is bounded by q^5 / (5 (1 - q)).
inline LogTerm log1m(double q) {
  constexpr double eps = std::numeric_limits<double>::epsilon();
  if (q == 0.0) return {0.0, 0.0};
  if (q < 0x1p-8) {
    const double v = -(q + q * q * (0.5 + q * (1.0 / 3.0 + q * 0.25)));
    const double rem = q * q * q * q * q / (5.0 * (1.0 - q));
    return {v, rem + 4.0 * eps * std::fabs(v)};
  }
  const double v = std::log1p(-q);
  return {v, 4.0 * eps * std::fabs(v)};
}

inline double round_down(double x) { return std::nextafter(x, -std::numeric_limits<double>::infinity()); }
inline double round_up(double x) { return std::nextafter(x, std::numeric_limits<double>::infinity()); }

}  // namespace detail

/// Bounds prod_{j>=1}(1 - q_j) in log space. tail_bound(J) must bound
/// sum_{j>J} q_j; without it (or while it is >= 1) the lower bound is 0.
template <class Factor>
ProductBounds infinite_product(Factor&& q, const TailBound& tail_bound, const ProductOptions& opts = {}) {
  NeumaierAccumulator log_sum;
  double log_err = 0.0;
  ProductBounds out;
  std::uint64_t checkpoint = std::max<std::uint64_t>(1, opts.min_terms);

  for (std::uint64_t j = 1;; ++j) {
    const double qj = q(j);
    if (!(qj >= 0.0) || qj >= 1.0) {
      throw std::invalid_argument("infinite_product: factor q_j outside [0,1) at j=" + std::to_string(j));
    }
    const auto lt = detail::log1m(qj);
    log_sum.add(lt.value);
    log_err += lt.error;

    if (j != checkpoint && j != opts.max_terms) continue;

    const double L = log_sum.value();
    const double err = (log_err + log_sum.error_bound()) * (1.0 + 1e-12);
    const double tb = tail_bound ? tail_bound(j) : std::numeric_limits<double>::infinity();

    // Each exp call is widened outward by two ulps.
    double upper = 1.0;
    if (L + err < 0.0) upper = detail::round_up(detail::round_up(std::exp(L + err)));
    double lower = 0.0;
    if (std::isfinite(tb) && tb < 1.0) {
      const double tail_log = tb > 0.0 ? detail::round_up(tb / (1.0 - tb)) : 0.0;
      const double arg = L - err - tail_log;
      lower = arg == 0.0 ? 1.0 : detail::round_down(detail::round_down(std::exp(arg)));
    }
    out.lower = std::clamp(lower, 0.0, 1.0);
    out.upper = std::clamp(upper, out.lower, 1.0);
    out.truncation_index = j;
    out.tail_bound = tb;
    if (out.upper - out.lower <= opts.target_width || j >= opts.max_terms) return out;
    checkpoint = std::min(opts.max_terms, checkpoint * 2);
  }
}

}  // namespace cgp
