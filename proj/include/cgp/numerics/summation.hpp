#pragma once

#include <cmath>
#include <cstdint>
#include <limits>
#include <span>
#include <stdexcept>

namespace cgp {

struct CompensatedSum {
  double sum = 0.0;
  double error_bound = 0.0;
};

/// Kahan-Babuska-Neumaier accumulator with a running a-priori error bound.
///
/// The bound is 2u|s| + (4nu^2 + 2*gamma_n^2) * sum|x_i| with u the unit
/// roundoff and gamma_n = n*u / (1 - n*u); it is finite while n*u < 1/2.
class NeumaierAccumulator {
 public:
  void add(double x) {
    if (!std::isfinite(x)) throw std::invalid_argument("compensated_sum: non-finite term");
    const double t = sum_ + x;
    if (std::fabs(sum_) >= std::fabs(x)) {
      comp_ += (sum_ - t) + x;
    } else {
      comp_ += (x - t) + sum_;
    }
    sum_ = t;
    abs_sum_ += std::fabs(x);
    ++count_;
  }

  NeumaierAccumulator& operator+=(double x) {
    add(x);
    return *this;
  }

  [[nodiscard]] double value() const noexcept { return sum_ + comp_; }
  [[nodiscard]] std::uint64_t count() const noexcept { return count_; }
  [[nodiscard]] double abs_sum() const noexcept { return abs_sum_; }

  [[nodiscard]] double error_bound() const noexcept {
    constexpr double u = std::numeric_limits<double>::epsilon() / 2;
    const double nu = static_cast<double>(count_) * u;
    if (nu >= 0.5) return std::numeric_limits<double>::infinity();
    const double gamma = nu / (1.0 - nu);
    return 2.0 * u * std::fabs(value()) + (4.0 * nu * u + 2.0 * gamma * gamma) * abs_sum_ * (1.0 + 2.0 * gamma);
  }

  [[nodiscard]] CompensatedSum result() const noexcept { return {value(), error_bound()}; }

 private:
  double sum_ = 0.0;
  double comp_ = 0.0;
  double abs_sum_ = 0.0;
  std::uint64_t count_ = 0;
};

inline CompensatedSum compensated_sum(std::span<const double> terms) {
  NeumaierAccumulator acc;
  for (double x : terms) acc.add(x);
  return acc.result();
}

}  // namespace cgp
