#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <stdexcept>
#include <string>

#include <boost/math/quadrature/gauss.hpp>

#include "cgp/families/law.hpp"

namespace cgp {

namespace detail {

inline double power_tail_sum(double coeff, double power, std::uint64_t J) {
  // sum_{k>J} coeff k^-power <= coeff J^{1-power} / (power - 1) for power > 1
  return coeff * std::pow(static_cast<double>(J), 1.0 - power) / (power - 1.0);
}

}  // namespace detail

/// Shared certificate logic for feedback laws that admit a sure power sandwich.
/// Subclasses provide the pointwise analytics and the sandwich constants.
class SandwichFeedback : public FeedbackFamily {
 public:
  [[nodiscard]] SeriesCertificate m1inv_certificate() const override { return inverse_certificate(true); }
  [[nodiscard]] SeriesCertificate inv_lower_certificate() const override { return inverse_certificate(false); }

  [[nodiscard]] SeriesCertificate small_certificate(double eta) const override {
    const auto s = sandwich();
    SeriesCertificate cert;
    if (s.power == 0.0) return constant_certificate(p_leq(s.from - 1, eta), "P(F<=eta) constant");
    cert.tail_bound = [s, eta](std::uint64_t J) {
      const auto first = std::max<std::uint64_t>(J + 1, s.from);
      return s.lo * std::pow(static_cast<double>(first), s.power) > eta ? 0.0
                                                                       : std::numeric_limits<double>::infinity();
    };
    cert.note = "F(k-1) >= " + format_number(s.lo) + "*k^" + format_number(s.power) + " exceeds eta eventually";
    return cert;
  }

  [[nodiscard]] SeriesCertificate m2inv_certificate(double eta) const override {
    const auto s = sandwich();
    if (s.power == 0.0) return constant_certificate(m2inv(s.from - 1, eta), "E[F^-2; F>eta] constant");
    SeriesCertificate cert;
    if (2.0 * s.power > 1.0) {
      const double c = 1.0 / (s.lo * s.lo);
      const double pw = 2.0 * s.power;
      cert.tail_bound = [c, pw](std::uint64_t J) { return detail::power_tail_sum(c, pw, J); };
      cert.note = "E[F^-2] <= " + format_number(c) + "*k^-" + format_number(pw);
      return cert;
    }
    std::uint64_t k0 = static_cast<std::uint64_t>(std::floor(std::pow(eta / s.lo, 1.0 / s.power))) + 1;
    while (s.lo * std::pow(static_cast<double>(k0), s.power) <= eta) ++k0;
    cert.minorant = PowerMinorant{1.0 / (s.hi * s.hi), 0.0, 2.0 * s.power, std::max(k0, s.from)};
    cert.note = "F surely above eta from k=" + std::to_string(cert.minorant->from);
    return cert;
  }

  [[nodiscard]] bool eta_summable_for_all() const override { return sandwich().power > 0.5; }

 private:
  [[nodiscard]] SeriesCertificate inverse_certificate(bool mean) const {
    const auto s = sandwich();
    SeriesCertificate cert;
    if (s.power > 1.0) {
      const double c = 1.0 / s.lo;
      const double pw = s.power;
      cert.tail_bound = [c, pw](std::uint64_t J) { return detail::power_tail_sum(c, pw, J); };
      cert.note = std::string(mean ? "E[1/F]" : "essinf 1/F") + " <= " + format_number(c) + "*k^-" + format_number(pw);
    } else {
      cert.minorant = PowerMinorant{1.0 / s.hi, 0.0, s.power, s.from};
      cert.note = "1/F >= " + format_number(1.0 / s.hi) + "*k^-" + format_number(s.power);
    }
    return cert;
  }

  [[nodiscard]] static SeriesCertificate constant_certificate(double c, const std::string& what) {
    SeriesCertificate cert;
    if (c > 0.0) {
      cert.minorant = PowerMinorant{c, 0.0, 0.0, 1};
    } else {
      cert.tail_bound = [](std::uint64_t) { return 0.0; };
    }
    cert.note = what;
    return cert;
  }
};

/// Feedback with F(j) = f(j) known exactly.
class DeterministicFeedback : public SandwichFeedback {
 public:
  [[nodiscard]] virtual double f(std::uint64_t j) const = 0;

  [[nodiscard]] bool deterministic() const override { return true; }
  [[nodiscard]] std::optional<double> value(std::uint64_t j) const override { return f(j); }
  [[nodiscard]] double sample_F(std::uint64_t j, Rng&) const override { return f(j); }
  [[nodiscard]] double p_leq(std::uint64_t j, double eta) const override { return f(j) <= eta ? 1.0 : 0.0; }
  [[nodiscard]] double m2inv(std::uint64_t j, double eta) const override {
    const double v = f(j);
    return v > eta ? 1.0 / (v * v) : 0.0;
  }
  [[nodiscard]] double m1inv(std::uint64_t j) const override { return 1.0 / f(j); }
  [[nodiscard]] double inv_lower(std::uint64_t j) const override { return 1.0 / f(j); }
  [[nodiscard]] double expect(std::uint64_t j, const std::function<double(double)>& g) const override {
    return g(f(j));
  }
};

/// f(j) = (j + 1)^p.
class PowerFeedback final : public DeterministicFeedback {
 public:
  explicit PowerFeedback(double p) : p_(p) {
    if (!(p >= 0.0) || !std::isfinite(p)) throw std::invalid_argument("power_feedback: p must be finite and >= 0");
  }
  [[nodiscard]] double exponent() const noexcept { return p_; }
  [[nodiscard]] std::string canonical() const override { return "power_feedback{p=" + format_number(p_) + "}"; }
  [[nodiscard]] double f(std::uint64_t j) const override { return std::pow(static_cast<double>(j) + 1.0, p_); }
  [[nodiscard]] PowerSandwich sandwich() const override { return {1.0, 1.0, p_, 1}; }

 private:
  double p_;
};

/// f(j) = a j + b. With b = 0 this is the classical Polya urn, where F(0) = 0
/// is only acceptable because urns start with at least one ball.
class AffineFeedback final : public DeterministicFeedback {
 public:
  AffineFeedback(double a, double b) : a_(a), b_(b) {
    if (!(a >= 0.0) || !(b >= 0.0) || !(a + b > 0.0) || !std::isfinite(a) || !std::isfinite(b)) {
      throw std::invalid_argument("affine_feedback: need a, b >= 0 and a + b > 0");
    }
  }
  [[nodiscard]] std::string canonical() const override {
    return "affine_feedback{a=" + format_number(a_) + ",b=" + format_number(b_) + "}";
  }
  [[nodiscard]] double f(std::uint64_t j) const override { return a_ * static_cast<double>(j) + b_; }
  [[nodiscard]] PowerSandwich sandwich() const override {
    if (a_ == 0.0) return {b_, b_, 0.0, 1};
    if (b_ == 0.0) return {a_ / 2.0, a_, 1.0, 2};  // a(k-1) >= a k / 2 once k >= 2
    return {std::min(a_, b_), std::max(a_, b_), 1.0, 1};
  }

 private:
  double a_, b_;
};

/// F(j) = (j + 1)^p M_j with M_j iid uniform on [lo, hi].
class RandomPowerFeedback final : public SandwichFeedback {
 public:
  RandomPowerFeedback(double p, double lo, double hi) : p_(p), lo_(lo), hi_(hi) {
    if (!(p >= 0.0) || !std::isfinite(p)) throw std::invalid_argument("random_power_feedback: p must be >= 0");
    if (!(lo > 0.0) || !(hi >= lo) || !std::isfinite(hi)) {
      throw std::invalid_argument("random_power_feedback: need 0 < lo <= hi");
    }
  }

  [[nodiscard]] std::string canonical() const override {
    return "random_power_feedback{p=" + format_number(p_) + ",lo=" + format_number(lo_) + ",hi=" + format_number(hi_) +
           "}";
  }
  [[nodiscard]] bool deterministic() const override { return false; }

  [[nodiscard]] double sample_F(std::uint64_t j, Rng& rng) const override {
    std::uniform_real_distribution<double> m(lo_, hi_);
    return scale(j) * m(rng);
  }

  [[nodiscard]] double p_leq(std::uint64_t j, double eta) const override {
    const double t = eta / scale(j);
    if (hi_ == lo_) return t >= lo_ ? 1.0 : 0.0;
    return std::clamp((t - lo_) / (hi_ - lo_), 0.0, 1.0);
  }
  [[nodiscard]] double m2inv(std::uint64_t j, double eta) const override {
    const double a = scale(j);
    if (hi_ == lo_) return a * lo_ > eta ? 1.0 / (a * a * lo_ * lo_) : 0.0;
    const double m0 = std::max(lo_, eta / a);
    if (m0 >= hi_) return 0.0;
    return (1.0 / m0 - 1.0 / hi_) / (hi_ - lo_) / (a * a);
  }
  [[nodiscard]] double m1inv(std::uint64_t j) const override {
    const double a = scale(j);
    if (hi_ == lo_) return 1.0 / (a * lo_);
    return std::log(hi_ / lo_) / (hi_ - lo_) / a;
  }
  [[nodiscard]] double inv_lower(std::uint64_t j) const override { return 1.0 / (scale(j) * hi_); }

  [[nodiscard]] double expect(std::uint64_t j, const std::function<double(double)>& g) const override {
    const double a = scale(j);
    if (hi_ == lo_) return g(a * lo_);
    auto integrand = [&](double m) { return g(a * m); };
    return boost::math::quadrature::gauss<double, 30>::integrate(integrand, lo_, hi_) / (hi_ - lo_);
  }

  [[nodiscard]] PowerSandwich sandwich() const override { return {lo_, hi_, p_, 1}; }

 private:
  [[nodiscard]] double scale(std::uint64_t j) const { return std::pow(static_cast<double>(j) + 1.0, p_); }
  double p_, lo_, hi_;
};

}  // namespace cgp
