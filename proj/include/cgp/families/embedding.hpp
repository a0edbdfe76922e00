#pragma once

#include <cmath>
#include <limits>
#include <memory>
#include <random>
#include <stdexcept>
#include <string>

#include <boost/math/special_functions/factorials.hpp>

#include "cgp/families/feedback.hpp"
#include "cgp/families/law.hpp"
#include "cgp/series/exp_diff.hpp"

namespace cgp {

/// Waiting times X_j ~ Exp(F(j-1)), with F(j-1) drawn afresh for each j.
///
/// With rates sandwiched in [cL j^p, cU j^p], every certificate below follows
/// from comparing against the extreme rates:
///   P(X_j > C)            <= e^{-C cL j^p} <= m! (C cL)^-m j^{-pm},  m = floor(1/p) + 1
///   E[X_j; X_j <= C]      in [g(C cL)/cU j^-p, 1/(cL j^p)]
///   E[Z^2; |Z| <= C]      in [2 cL q(C cL)/cU^3 j^-2p, 4/(cL^2 j^2p)]
/// where Z is the symmetrized difference and g, q are exponential remainders.
class EmbeddedFamily final : public WaitingFamily {
 public:
  explicit EmbeddedFamily(FeedbackFamilyPtr fb) : fb_(std::move(fb)) {
    if (!fb_) throw std::invalid_argument("embed_feedback: null feedback family");
  }

  [[nodiscard]] const FeedbackFamilyPtr& feedback() const noexcept { return fb_; }

  [[nodiscard]] std::string canonical() const override {
    if (const auto* pf = dynamic_cast<const PowerFeedback*>(fb_.get())) {
      return "power_exponential{p=" + format_number(pf->exponent()) + "}";
    }
    return "embed(" + fb_->canonical() + ")";
  }
  [[nodiscard]] SupportKind support_kind() const override { return SupportKind::atomless; }

  [[nodiscard]] double sample(std::uint64_t j, Rng& rng) const override {
    const double rate = fb_->sample_F(j - 1, rng);
    if (!(rate > 0.0)) throw std::domain_error("embedded family: nonpositive rate F(" + std::to_string(j - 1) + ")");
    std::exponential_distribution<double> e(rate);
    return e(rng);
  }

  [[nodiscard]] Analytic tail(std::uint64_t j, double C) const override {
    if (C < 0.0) return 1.0;
    return fb_->expect(j - 1, [C](double r) { return std::exp(-r * C); });
  }
  [[nodiscard]] Analytic diag(std::uint64_t) const override { return 0.0; }
  [[nodiscard]] Analytic trunc_mean(std::uint64_t j, double C) const override {
    if (C <= 0.0) return 0.0;
    return fb_->expect(j - 1, [C](double r) { return exp_trunc_mean_factor(r * C) / r; });
  }
  [[nodiscard]] Analytic sym_tail(std::uint64_t j, double C) const override {
    if (C < 0.0) return 1.0;
    if (fb_->deterministic()) {
      const double r = *fb_->value(j - 1);
      return exp_diff_tail(r, r, C);
    }
    return fb_->expect(j - 1, [&](double r) {
      return fb_->expect(j - 1, [&](double r2) { return exp_diff_tail(r, r2, C); });
    });
  }
  [[nodiscard]] Analytic sym_m2(std::uint64_t j, double C) const override {
    if (C <= 0.0) return 0.0;
    if (fb_->deterministic()) {
      const double r = *fb_->value(j - 1);
      return exp_diff_m2(r, r, C);
    }
    return fb_->expect(j - 1, [&](double r) {
      return fb_->expect(j - 1, [&](double r2) { return exp_diff_m2(r, r2, C); });
    });
  }

  [[nodiscard]] SeriesCertificate tail_certificate(double C) const override {
    require_positive(C);
    const auto s = fb_->sandwich();
    SeriesCertificate cert;
    if (s.power == 0.0) {
      cert.minorant = PowerMinorant{std::exp(-C * s.hi), 0.0, 0.0, s.from};
      cert.note = "constant exponential tail";
      return cert;
    }
    const double m = std::floor(1.0 / s.power) + 1.0;
    const double coeff = boost::math::factorial<double>(static_cast<unsigned>(m)) / std::pow(C * s.lo, m);
    const double pw = s.power * m;
    cert.tail_bound = [coeff, pw](std::uint64_t J) { return detail::power_tail_sum(coeff, pw, J); };
    cert.note = "e^-x <= m!/x^m with m=" + format_number(m);
    return cert;
  }

  [[nodiscard]] SeriesCertificate trunc_mean_certificate(double C) const override {
    require_positive(C);
    const auto s = fb_->sandwich();
    SeriesCertificate cert;
    if (s.power > 1.0) {
      const double c = 1.0 / s.lo;
      const double pw = s.power;
      cert.tail_bound = [c, pw](std::uint64_t J) { return detail::power_tail_sum(c, pw, J); };
      cert.note = "truncated mean <= mean";
    } else {
      cert.minorant = PowerMinorant{exp_trunc_mean_factor(C * s.lo) / s.hi, 0.0, s.power, s.from};
      cert.note = "truncated mean >= g(C cL)/cU j^-p";
    }
    return cert;
  }

  [[nodiscard]] SeriesCertificate sym_tail_certificate(double C) const override {
    auto cert = tail_certificate(C);
    if (cert.tail_bound) {
      auto one = cert.tail_bound;
      cert.tail_bound = [one](std::uint64_t J) { return 2.0 * one(J); };
      cert.note = "P(|Z|>C) <= 2 P(X>C); " + cert.note;
    }
    return cert;
  }

  [[nodiscard]] SeriesCertificate sym_m2_certificate(double C) const override {
    require_positive(C);
    const auto s = fb_->sandwich();
    SeriesCertificate cert;
    if (2.0 * s.power > 1.0) {
      const double c = 4.0 / (s.lo * s.lo);
      const double pw = 2.0 * s.power;
      cert.tail_bound = [c, pw](std::uint64_t J) { return detail::power_tail_sum(c, pw, J); };
      cert.note = "E Z^2 = 2 Var X <= 4 E[F^-2]";
    } else {
      const double coeff = 2.0 * s.lo * exp_trunc_m2_factor(C * s.lo) / (s.hi * s.hi * s.hi);
      cert.minorant = PowerMinorant{coeff, 0.0, 2.0 * s.power, s.from};
      cert.note = "truncated second moment >= 2 cL q(C cL)/cU^3 j^-2p";
    }
    return cert;
  }

  [[nodiscard]] bool gt_summable_for_all_eps() const override { return fb_->sandwich().power > 0.0; }

  [[nodiscard]] SeriesCertificate neq_certificate() const override {
    SeriesCertificate cert;
    cert.minorant = PowerMinorant{1.0, 0.0, 0.0, 1};
    cert.note = "atomless terms";
    return cert;
  }

 private:
  static void require_positive(double C) {
    if (!(C > 0.0)) throw std::invalid_argument("truncation level C must be positive");
  }

  FeedbackFamilyPtr fb_;
};

inline WaitingFamilyPtr embed_feedback(FeedbackFamilyPtr fb) { return std::make_shared<EmbeddedFamily>(std::move(fb)); }

}  // namespace cgp
