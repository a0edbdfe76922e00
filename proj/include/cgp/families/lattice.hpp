#pragma once

#include <algorithm>
#include <bit>
#include <cmath>
#include <limits>
#include <random>
#include <string>
#include <vector>

#include "cgp/families/counter.hpp"
#include "cgp/families/law.hpp"

namespace cgp {

namespace detail {
inline double pow2d(long long k) { return std::ldexp(1.0, static_cast<int>(std::clamp<long long>(k, -2000, 2000))); }
}  // namespace detail

/// Deterministic X_j: listed values x_1..x_K, then scale * ratio^j.
class ConstTable final : public WaitingFamily {
 public:
  ConstTable(std::vector<double> table, double scale, double ratio)
      : table_(std::move(table)), scale_(scale), ratio_(ratio) {
    for (double x : table_) {
      if (!(x >= 0.0) || !std::isfinite(x)) throw std::invalid_argument("const_table: entries must be finite and >= 0");
    }
    if (!(scale >= 0.0) || !(ratio >= 0.0) || !std::isfinite(scale) || !std::isfinite(ratio)) {
      throw std::invalid_argument("const_table: scale and ratio must be finite and >= 0");
    }
  }

  [[nodiscard]] std::string canonical() const override {
    std::string out = "const_table{";
    for (std::size_t i = 0; i < table_.size(); ++i) out += "x" + std::to_string(i + 1) + "=" + format_number(table_[i]) + ",";
    return out + "scale=" + format_number(scale_) + ",ratio=" + format_number(ratio_) + "}";
  }
  [[nodiscard]] SupportKind support_kind() const override { return SupportKind::dyadic_lattice; }
  [[nodiscard]] bool deterministic() const override { return true; }

  [[nodiscard]] double value(std::uint64_t j) const {
    if (j >= 1 && j <= table_.size()) return table_[j - 1];
    return scale_ * std::pow(ratio_, static_cast<double>(j));
  }

  [[nodiscard]] double sample(std::uint64_t j, Rng&) const override { return value(j); }
  [[nodiscard]] Dyadic sample_exact(std::uint64_t j, Rng&) const override { return Dyadic::from_double(value(j)); }

  [[nodiscard]] Analytic tail(std::uint64_t j, double C) const override { return value(j) > C ? 1.0 : 0.0; }
  [[nodiscard]] Analytic diag(std::uint64_t) const override { return 1.0; }
  [[nodiscard]] Analytic trunc_mean(std::uint64_t j, double C) const override {
    const double v = value(j);
    return v <= C ? v : 0.0;
  }
  [[nodiscard]] Analytic sym_tail(std::uint64_t, double C) const override { return C < 0.0 ? 1.0 : 0.0; }
  [[nodiscard]] Analytic sym_m2(std::uint64_t, double) const override { return 0.0; }

  [[nodiscard]] SeriesCertificate tail_certificate(double C) const override {
    if (ratio_ < 1.0 || scale_ == 0.0) {
      return detail::convergent(
          [this, C](std::uint64_t J) {
            return J >= table_.size() && value(J + 1) <= C ? 0.0 : std::numeric_limits<double>::infinity();
          },
          "geometric values fall below C");
    }
    if (ratio_ == 1.0) {
      if (scale_ > C) return detail::divergent_constant(1.0, "constant values above C");
      return detail::convergent(zero_after_table(), "constant values at most C");
    }
    return {};
  }
  [[nodiscard]] SeriesCertificate trunc_mean_certificate(double C) const override {
    if (ratio_ < 1.0 || scale_ == 0.0) return detail::convergent(geometric_tail(), "geometric tail sum");
    if (ratio_ == 1.0) {
      if (scale_ <= C) return detail::divergent_constant(scale_, "constant values at most C");
      return detail::convergent(zero_after_table(), "constant values above C");
    }
    return {};
  }
  [[nodiscard]] SeriesCertificate sym_tail_certificate(double) const override {
    return detail::convergent([](std::uint64_t) { return 0.0; }, "deterministic");
  }
  [[nodiscard]] SeriesCertificate sym_m2_certificate(double C) const override { return sym_tail_certificate(C); }
  [[nodiscard]] bool gt_summable_for_all_eps() const override { return ratio_ < 1.0 || scale_ == 0.0; }
  [[nodiscard]] SeriesCertificate neq_certificate() const override { return sym_tail_certificate(1.0); }

  [[nodiscard]] std::optional<std::vector<LatticeAtom>> atoms(std::uint64_t j, double) const override {
    return std::vector<LatticeAtom>{{Dyadic::from_double(value(j)), 1.0}};
  }
  [[nodiscard]] std::optional<Dyadic> anchor(std::uint64_t j) const override { return Dyadic::from_double(value(j)); }
  [[nodiscard]] TailBound anchor_deviation_bound() const override {
    return [](std::uint64_t) { return 0.0; };
  }
  [[nodiscard]] std::optional<Dyadic> sure_tail_bound(std::uint64_t J) const override {
    if (J < table_.size() || !(ratio_ < 1.0 || scale_ == 0.0)) return std::nullopt;
    const double b = geometric_tail()(J);
    return Dyadic::from_double(std::nextafter(b * (1.0 + 1e-12), std::numeric_limits<double>::infinity()));
  }

 private:
  [[nodiscard]] TailBound geometric_tail() const {
    // sum_{j>J} scale ratio^j, slightly inflated to cover rounding in pow
    return [this](std::uint64_t J) {
      if (J < table_.size()) return std::numeric_limits<double>::infinity();
      if (scale_ == 0.0 || ratio_ == 0.0) return 0.0;
      return scale_ * std::pow(ratio_, static_cast<double>(J + 1)) / (1.0 - ratio_) * (1.0 + 1e-12);
    };
  }
  [[nodiscard]] TailBound zero_after_table() const {
    return [this](std::uint64_t J) { return J >= table_.size() ? 0.0 : std::numeric_limits<double>::infinity(); };
  }

  std::vector<double> table_;
  double scale_;
  double ratio_;
};

/// Y_j = 4^-j with probability 2^-j, otherwise 0. Distinct subsets give
/// distinct sums, so the sum has an atom at every finite pattern.
class FourAdic final : public WaitingFamily {
 public:
  [[nodiscard]] std::string canonical() const override { return "four_adic{}"; }
  [[nodiscard]] SupportKind support_kind() const override { return SupportKind::dyadic_lattice; }

  static double a(std::uint64_t j) { return detail::pow2d(-static_cast<long long>(j)); }
  static double v(std::uint64_t j) { return detail::pow2d(-2 * static_cast<long long>(j)); }

  [[nodiscard]] double sample(std::uint64_t j, Rng& rng) const override {
    std::bernoulli_distribution b(a(j));
    return b(rng) ? v(j) : 0.0;
  }
  [[nodiscard]] Dyadic sample_exact(std::uint64_t j, Rng& rng) const override {
    std::bernoulli_distribution b(a(j));
    return b(rng) ? Dyadic::pow2(-2 * static_cast<long long>(j)) : Dyadic{};
  }

  [[nodiscard]] Analytic tail(std::uint64_t j, double C) const override {
    if (C < 0.0) return 1.0;
    return C < v(j) ? a(j) : 0.0;
  }
  [[nodiscard]] Analytic diag(std::uint64_t j) const override { return a(j) * a(j) + (1 - a(j)) * (1 - a(j)); }
  [[nodiscard]] Analytic trunc_mean(std::uint64_t j, double C) const override { return C >= v(j) ? a(j) * v(j) : 0.0; }
  [[nodiscard]] Analytic sym_tail(std::uint64_t j, double C) const override {
    if (C < 0.0) return 1.0;
    return C < v(j) ? 2 * a(j) * (1 - a(j)) : 0.0;
  }
  [[nodiscard]] Analytic sym_m2(std::uint64_t j, double C) const override {
    return C >= v(j) ? 2 * a(j) * (1 - a(j)) * v(j) * v(j) : 0.0;
  }

  [[nodiscard]] SeriesCertificate tail_certificate(double C) const override {
    return detail::convergent(detail::zero_beyond(v, C), "support below 4^-j");
  }
  [[nodiscard]] SeriesCertificate trunc_mean_certificate(double) const override {
    return detail::convergent([](std::uint64_t J) { return detail::pow2d(-3 * static_cast<long long>(J)); }, "terms <= 8^-j");
  }
  [[nodiscard]] SeriesCertificate sym_tail_certificate(double C) const override { return tail_certificate(C); }
  [[nodiscard]] SeriesCertificate sym_m2_certificate(double) const override {
    return detail::convergent([](std::uint64_t J) { return detail::pow2d(-4 * static_cast<long long>(J)); },
                              "terms <= 16^-j");
  }
  [[nodiscard]] bool gt_summable_for_all_eps() const override { return true; }
  [[nodiscard]] SeriesCertificate neq_certificate() const override {
    return detail::convergent([](std::uint64_t J) { return detail::pow2d(1 - static_cast<long long>(J)); },
                              "1 - diag <= 2^{1-j}");
  }

  [[nodiscard]] std::optional<std::vector<LatticeAtom>> atoms(std::uint64_t j, double) const override {
    return std::vector<LatticeAtom>{{Dyadic{}, 1 - a(j)}, {Dyadic::pow2(-2 * static_cast<long long>(j)), a(j)}};
  }
  [[nodiscard]] std::optional<Dyadic> anchor(std::uint64_t) const override { return Dyadic{}; }
  [[nodiscard]] TailBound anchor_deviation_bound() const override {
    return [](std::uint64_t J) { return detail::pow2d(-static_cast<long long>(J)); };
  }
  [[nodiscard]] std::optional<Dyadic> sure_tail_bound(std::uint64_t J) const override {
    return Dyadic::pow2(-2 * static_cast<long long>(J) - 1);  // 4^-J / 3 < 4^-J / 2
  }
};

/// Blocks k = 1, 2, ... of 2^k consecutive terms, each 4^-k or 0 with
/// probability 1/2. The sum converges while sum(1 - diag) diverges.
class BinomialBlocks final : public WaitingFamily {
 public:
  [[nodiscard]] std::string canonical() const override { return "binomial_blocks{}"; }
  [[nodiscard]] SupportKind support_kind() const override { return SupportKind::dyadic_lattice; }

  static long long block(std::uint64_t j) { return static_cast<long long>(std::bit_width(j + 1)) - 1; }
  static double v(std::uint64_t j) { return detail::pow2d(-2 * block(j)); }

  [[nodiscard]] double sample(std::uint64_t j, Rng& rng) const override {
    std::bernoulli_distribution b(0.5);
    return b(rng) ? v(j) : 0.0;
  }
  [[nodiscard]] Dyadic sample_exact(std::uint64_t j, Rng& rng) const override {
    std::bernoulli_distribution b(0.5);
    return b(rng) ? Dyadic::pow2(-2 * block(j)) : Dyadic{};
  }

  [[nodiscard]] Analytic tail(std::uint64_t j, double C) const override {
    if (C < 0.0) return 1.0;
    return C < v(j) ? 0.5 : 0.0;
  }
  [[nodiscard]] Analytic diag(std::uint64_t) const override { return 0.5; }
  [[nodiscard]] Analytic trunc_mean(std::uint64_t j, double C) const override { return C >= v(j) ? 0.5 * v(j) : 0.0; }
  [[nodiscard]] Analytic sym_tail(std::uint64_t j, double C) const override { return tail(j, C); }
  [[nodiscard]] Analytic sym_m2(std::uint64_t j, double C) const override {
    return C >= v(j) ? 0.5 * v(j) * v(j) : 0.0;
  }

  [[nodiscard]] SeriesCertificate tail_certificate(double C) const override {
    return detail::convergent(detail::zero_beyond(v, C), "support below 4^-k");
  }
  [[nodiscard]] SeriesCertificate trunc_mean_certificate(double) const override {
    // block k contributes 2^k * 4^-k / 2 = 2^{-k-1}
    return detail::convergent([](std::uint64_t J) { return detail::pow2d(-block(J + 1)); }, "block sums 2^{-k-1}");
  }
  [[nodiscard]] SeriesCertificate sym_tail_certificate(double C) const override { return tail_certificate(C); }
  [[nodiscard]] SeriesCertificate sym_m2_certificate(double) const override {
    return detail::convergent([](std::uint64_t J) { return detail::pow2d(-3 * block(J + 1)); }, "block sums 8^-k / 2");
  }
  [[nodiscard]] bool gt_summable_for_all_eps() const override { return true; }
  [[nodiscard]] SeriesCertificate neq_certificate() const override {
    return detail::divergent_constant(0.5, "1 - diag = 1/2");
  }

  [[nodiscard]] std::optional<std::vector<LatticeAtom>> atoms(std::uint64_t j, double) const override {
    return std::vector<LatticeAtom>{{Dyadic{}, 0.5}, {Dyadic::pow2(-2 * block(j)), 0.5}};
  }
  [[nodiscard]] std::optional<Dyadic> anchor(std::uint64_t) const override { return Dyadic{}; }
  [[nodiscard]] TailBound anchor_deviation_bound() const override {
    return [](std::uint64_t) { return std::numeric_limits<double>::infinity(); };
  }
  [[nodiscard]] std::optional<Dyadic> sure_tail_bound(std::uint64_t J) const override {
    return Dyadic::pow2(1 - block(J + 1));
  }
};

/// Y_1 uniform on [0, 1); Y_j for j >= 2 follows the two-point counter law.
class UniformFirst final : public WaitingFamily {
 public:
  [[nodiscard]] std::string canonical() const override { return "uniform_first{}"; }
  [[nodiscard]] SupportKind support_kind() const override { return SupportKind::atomless; }

  [[nodiscard]] double sample(std::uint64_t j, Rng& rng) const override {
    if (j == 1) {
      std::uniform_real_distribution<double> u(0.0, 1.0);
      return u(rng);
    }
    return rest_.sample(j, rng);
  }

  [[nodiscard]] Analytic tail(std::uint64_t j, double C) const override {
    if (j == 1) return std::clamp(1.0 - C, 0.0, 1.0);
    return rest_.tail(j, C);
  }
  [[nodiscard]] Analytic diag(std::uint64_t j) const override { return j == 1 ? 0.0 : *rest_.diag(j); }
  [[nodiscard]] Analytic trunc_mean(std::uint64_t j, double C) const override {
    if (j == 1) {
      const double c = std::clamp(C, 0.0, 1.0);
      return c * c / 2.0;
    }
    return rest_.trunc_mean(j, C);
  }
  [[nodiscard]] Analytic sym_tail(std::uint64_t j, double C) const override {
    if (j == 1) {
      const double c = std::clamp(C, 0.0, 1.0);
      return C < 0.0 ? 1.0 : (1.0 - c) * (1.0 - c);
    }
    return rest_.sym_tail(j, C);
  }
  [[nodiscard]] Analytic sym_m2(std::uint64_t j, double C) const override {
    if (j == 1) {
      const double c = std::clamp(C, 0.0, 1.0);  // |U - U'| has density 2(1 - z) on [0, 1]
      return 2.0 * (c * c * c / 3.0 - c * c * c * c / 4.0);
    }
    return rest_.sym_m2(j, C);
  }

  [[nodiscard]] SeriesCertificate tail_certificate(double C) const override { return rest_.tail_certificate(C); }
  [[nodiscard]] SeriesCertificate trunc_mean_certificate(double C) const override {
    return rest_.trunc_mean_certificate(C);
  }
  [[nodiscard]] SeriesCertificate sym_tail_certificate(double C) const override {
    return rest_.sym_tail_certificate(C);
  }
  [[nodiscard]] SeriesCertificate sym_m2_certificate(double C) const override { return rest_.sym_m2_certificate(C); }
  [[nodiscard]] bool gt_summable_for_all_eps() const override { return true; }
  [[nodiscard]] SeriesCertificate neq_certificate() const override { return rest_.neq_certificate(); }

  [[nodiscard]] std::optional<std::vector<LatticeAtom>> atoms(std::uint64_t j, double cutoff) const override {
    if (j == 1) return std::vector<LatticeAtom>{};
    return rest_.atoms(j, cutoff);
  }
  [[nodiscard]] std::optional<Dyadic> anchor(std::uint64_t j) const override {
    return j == 1 ? std::nullopt : rest_.anchor(j);
  }
  [[nodiscard]] TailBound anchor_deviation_bound() const override { return rest_.anchor_deviation_bound(); }
  [[nodiscard]] std::optional<Dyadic> sure_tail_bound(std::uint64_t J) const override {
    return J == 0 ? std::optional<Dyadic>{} : rest_.sure_tail_bound(J);
  }

 private:
  TwoPointCounter rest_;
};

/// Symmetric signs: Y_j = +-scale * ratio^j with probability 1/2 each.
class Rademacher final : public IndexedLaw {
 public:
  Rademacher(double scale, double ratio) : scale_(scale), ratio_(ratio) {
    if (!(scale >= 0.0) || !(ratio >= 0.0) || !std::isfinite(scale) || !std::isfinite(ratio)) {
      throw std::invalid_argument("rademacher: scale and ratio must be finite and >= 0");
    }
  }

  [[nodiscard]] std::string canonical() const override {
    return "rademacher{scale=" + format_number(scale_) + ",ratio=" + format_number(ratio_) + "}";
  }
  [[nodiscard]] SupportKind support_kind() const override { return SupportKind::dyadic_lattice; }
  [[nodiscard]] bool nonnegative() const override { return false; }

  [[nodiscard]] double magnitude(std::uint64_t j) const { return scale_ * std::pow(ratio_, static_cast<double>(j)); }

  [[nodiscard]] double sample(std::uint64_t j, Rng& rng) const override {
    std::bernoulli_distribution b(0.5);
    return b(rng) ? magnitude(j) : -magnitude(j);
  }
  [[nodiscard]] Dyadic exact_magnitude(std::uint64_t j) const {
    return Dyadic::from_double(scale_) * pow(Dyadic::from_double(ratio_), j);
  }
  [[nodiscard]] Dyadic sample_exact(std::uint64_t j, Rng& rng) const override {
    std::bernoulli_distribution b(0.5);
    return b(rng) ? exact_magnitude(j) : -exact_magnitude(j);
  }

  [[nodiscard]] Analytic tail(std::uint64_t j, double C) const override {
    const double m = magnitude(j);
    return 0.5 * (m > C ? 1.0 : 0.0) + 0.5 * (-m > C ? 1.0 : 0.0);
  }
  [[nodiscard]] Analytic diag(std::uint64_t) const override { return scale_ == 0.0 || ratio_ == 0.0 ? 1.0 : 0.5; }
  [[nodiscard]] Analytic trunc_mean(std::uint64_t j, double C) const override {
    const double m = magnitude(j);
    return 0.5 * (m <= C ? m : 0.0) - 0.5 * (-m <= C ? m : 0.0);
  }
  [[nodiscard]] SeriesCertificate neq_certificate() const override {
    if (scale_ == 0.0) return detail::convergent([](std::uint64_t) { return 0.0; }, "zero family");
    if (ratio_ == 0.0) return detail::convergent([](std::uint64_t) { return 0.0; }, "zero beyond j=0");
    return detail::divergent_constant(0.5, "1 - diag = 1/2 while terms are nonzero");
  }

  [[nodiscard]] std::optional<std::vector<LatticeAtom>> atoms(std::uint64_t j, double) const override {
    const auto m = exact_magnitude(j);
    if (m.is_zero()) return std::vector<LatticeAtom>{{m, 1.0}};
    return std::vector<LatticeAtom>{{-m, 0.5}, {m, 0.5}};
  }

 private:
  double scale_;
  double ratio_;
};

}  // namespace cgp
