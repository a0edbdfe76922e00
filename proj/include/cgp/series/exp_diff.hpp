#pragma once

#include <cmath>
#include <limits>
#include <stdexcept>

#include <boost/math/special_functions/gamma.hpp>

namespace cgp {

/// 1 - e^{-x} sum_{k<n} x^k/k!, i.e. P(Poisson(x) >= n), without cancellation.
inline double poisson_upper(int n, double x) {
  if (x <= 0.0) return 0.0;
  if (std::isinf(x)) return 1.0;
  return boost::math::gamma_p(static_cast<double>(n), x);
}

/// g(x) = 1 - e^{-x}(1 + x); E[X 1{X <= C}] = g(rC)/r for X ~ Exp(r).
inline double exp_trunc_mean_factor(double x) { return poisson_upper(2, x); }

/// q(x) = 1 - e^{-x}(1 + x + x^2/2).
inline double exp_trunc_m2_factor(double x) { return poisson_upper(3, x); }

namespace detail {
inline void check_rates(double r, double r2) {
  if (!(r > 0.0) || !(r2 > 0.0) || std::isinf(r) || std::isinf(r2)) {
    throw std::invalid_argument("exponential rates must be positive and finite");
  }
}
}  // namespace detail

/// P(|X - X'| > C) for independent X ~ Exp(r), X' ~ Exp(r2).
inline double exp_diff_tail(double r, double r2, double C) {
  detail::check_rates(r, r2);
  if (std::isnan(C) || C < 0.0) throw std::invalid_argument("exp_diff_tail: C must be nonnegative");
  if (std::isinf(C)) return 0.0;
  const double s = r + r2;
  return r2 / s * std::exp(-r * C) + r / s * std::exp(-r2 * C);
}

/// E[(X - X')^2 1{|X - X'| <= C}] for independent X ~ Exp(r), X' ~ Exp(r2); C may be infinite.
///
/// The density of X - X' is r r2/(r + r2) e^{-r z} for z > 0 and the mirror
/// with r2 for z < 0, which integrates to the expression below.
inline double exp_diff_m2(double r, double r2, double C) {
  detail::check_rates(r, r2);
  if (std::isnan(C) || C < 0.0) throw std::invalid_argument("exp_diff_m2: C must be nonnegative");
  const double s = r + r2;
  if (std::isinf(C)) return 2.0 / s * (r2 / (r * r) + r / (r2 * r2));
  return 2.0 * r * r2 / s *
         (exp_trunc_m2_factor(r * C) / (r * r * r) + exp_trunc_m2_factor(r2 * C) / (r2 * r2 * r2));
}

}  // namespace cgp
