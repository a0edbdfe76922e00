#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <span>
#include <stdexcept>
#include <vector>

#include <boost/math/special_functions/gamma.hpp>

namespace cgp {

struct Interval {
  double lower = 0.0;
  double upper = 1.0;
};

/// Wilson score interval for k successes out of n; z = 1.96 is the 95% level.
inline Interval wilson_ci(std::uint64_t k, std::uint64_t n, double z = 1.96) {
  if (n == 0) throw std::invalid_argument("wilson_ci: no trials");
  if (k > n) throw std::invalid_argument("wilson_ci: more successes than trials");
  const double nn = static_cast<double>(n);
  const double ph = static_cast<double>(k) / nn;
  const double z2 = z * z;
  const double denom = 1.0 + z2 / nn;
  const double centre = (ph + z2 / (2.0 * nn)) / denom;
  const double half = z * std::sqrt(ph * (1.0 - ph) / nn + z2 / (4.0 * nn * nn)) / denom;
  Interval out{std::max(0.0, centre - half), std::min(1.0, centre + half)};
  // Pin the degenerate ends exactly so k=0 and k=n mirror each other.
  if (k == 0) out.lower = 0.0;
  if (k == n) out.upper = 1.0;
  return out;
}

/// Upper tail of the chi-square distribution.
inline double chi_square_sf(double stat, double dof) {
  if (!(dof > 0.0)) throw std::invalid_argument("chi-square: degrees of freedom must be positive");
  if (stat <= 0.0) return 1.0;
  return boost::math::gamma_q(dof / 2.0, stat / 2.0);
}

struct ChiSquareResult {
  double stat = 0.0;
  int dof = 0;
  double p_value = 1.0;
  /// Cells left after pooling.
  std::size_t cells = 0;
};

/// Pearson goodness of fit. Cells with expected count below min_expected are
/// pooled (in order of increasing expectation) until every cell reaches it.
inline ChiSquareResult chi_square_gof(std::span<const std::uint64_t> counts, std::span<const double> probs,
                                      double min_expected = 5.0) {
  if (counts.size() != probs.size()) throw std::invalid_argument("chi-square: counts and probabilities differ in size");
  double total_p = 0.0;
  std::uint64_t n = 0;
  for (std::size_t i = 0; i < probs.size(); ++i) {
    if (!(probs[i] >= 0.0)) throw std::invalid_argument("chi-square: negative probability");
    total_p += probs[i];
    n += counts[i];
  }
  if (std::fabs(total_p - 1.0) > 1e-12) throw std::invalid_argument("chi-square: probabilities do not sum to 1");
  if (n == 0) throw std::invalid_argument("chi-square: no observations");

  struct Cell {
    double expected;
    double observed;
  };
  std::vector<Cell> cells;
  for (std::size_t i = 0; i < probs.size(); ++i) {
    const double e = probs[i] * static_cast<double>(n);
    if (e == 0.0) {
      if (counts[i] != 0) {
        return {std::numeric_limits<double>::infinity(), static_cast<int>(probs.size()) - 1, 0.0, probs.size()};
      }
      continue;
    }
    cells.push_back({e, static_cast<double>(counts[i])});
  }
  std::sort(cells.begin(), cells.end(), [](const Cell& a, const Cell& b) { return a.expected > b.expected; });
  while (cells.size() > 1 && cells.back().expected < min_expected) {
    const Cell last = cells.back();
    cells.pop_back();
    cells.back().expected += last.expected;
    cells.back().observed += last.observed;
    std::sort(cells.begin(), cells.end(), [](const Cell& a, const Cell& b) { return a.expected > b.expected; });
  }
  ChiSquareResult r;
  r.cells = cells.size();
  r.dof = static_cast<int>(cells.size()) - 1;
  if (r.dof <= 0) throw std::invalid_argument("chi-square: fewer than two cells after pooling");
  for (const auto& c : cells) r.stat += (c.observed - c.expected) * (c.observed - c.expected) / c.expected;
  r.p_value = chi_square_sf(r.stat, r.dof);
  return r;
}

}  // namespace cgp
