#pragma once

#include <cmath>
#include <limits>
#include <memory>
#include <random>
#include <string>

#include "cgp/families/law.hpp"

namespace cgp {

namespace detail {

inline double inv_sq(std::uint64_t j) {
  const double d = static_cast<double>(j) + 1.0;
  return 1.0 / (d * d);
}

inline TailBound harmonic_tail(double c) {
  // sum_{j>J} c/(j+1)^2 <= c/(J+1)
  return [c](std::uint64_t J) { return c / (static_cast<double>(J) + 1.0); };
}

inline TailBound zero_beyond(std::function<double(std::uint64_t)> value, double C) {
  // terms vanish once a nonincreasing support bound value(j) drops to C
  return [value = std::move(value), C](std::uint64_t J) {
    return value(J + 1) <= C ? 0.0 : std::numeric_limits<double>::infinity();
  };
}

inline SeriesCertificate divergent_constant(double c, std::string note) {
  SeriesCertificate cert;
  cert.minorant = PowerMinorant{c, 0.0, 0.0, 1};
  cert.note = std::move(note);
  return cert;
}

inline SeriesCertificate convergent(TailBound tb, std::string note) {
  SeriesCertificate cert;
  cert.tail_bound = std::move(tb);
  cert.note = std::move(note);
  return cert;
}

}  // namespace detail

/// X_j = 2^-j with probability 1 - 1/(j+1)^2, otherwise 0.
class TwoPointCounter final : public WaitingFamily {
 public:
  [[nodiscard]] std::string canonical() const override { return "two_point_counter{}"; }
  [[nodiscard]] SupportKind support_kind() const override { return SupportKind::dyadic_lattice; }

  static double p(std::uint64_t j) { return 1.0 - detail::inv_sq(j); }
  static double q(std::uint64_t j) { return detail::inv_sq(j); }
  static double top(std::uint64_t j) { return std::ldexp(1.0, -static_cast<int>(std::min<std::uint64_t>(j, 2000))); }

  [[nodiscard]] double sample(std::uint64_t j, Rng& rng) const override {
    std::bernoulli_distribution b(p(j));
    return b(rng) ? top(j) : 0.0;
  }
  [[nodiscard]] Dyadic sample_exact(std::uint64_t j, Rng& rng) const override {
    std::bernoulli_distribution b(p(j));
    return b(rng) ? Dyadic::pow2(-static_cast<long long>(j)) : Dyadic{};
  }

  [[nodiscard]] Analytic tail(std::uint64_t j, double C) const override {
    if (C < 0.0) return 1.0;
    return C < top(j) ? p(j) : 0.0;
  }
  [[nodiscard]] Analytic diag(std::uint64_t j) const override { return p(j) * p(j) + q(j) * q(j); }
  [[nodiscard]] Analytic trunc_mean(std::uint64_t j, double C) const override {
    return C >= top(j) ? p(j) * top(j) : 0.0;
  }
  [[nodiscard]] Analytic sym_tail(std::uint64_t j, double C) const override {
    if (C < 0.0) return 1.0;
    return C < top(j) ? 2.0 * p(j) * q(j) : 0.0;
  }
  [[nodiscard]] Analytic sym_m2(std::uint64_t j, double C) const override {
    return C >= top(j) ? 2.0 * p(j) * q(j) * top(j) * top(j) : 0.0;
  }

  [[nodiscard]] SeriesCertificate tail_certificate(double C) const override {
    return detail::convergent(detail::zero_beyond(top, C), "support below 2^-j");
  }
  [[nodiscard]] SeriesCertificate trunc_mean_certificate(double) const override {
    return detail::convergent([](std::uint64_t J) { return std::ldexp(1.0, -static_cast<int>(std::min<std::uint64_t>(J, 2000))); },
                              "terms <= 2^-j");
  }
  [[nodiscard]] SeriesCertificate sym_tail_certificate(double C) const override { return tail_certificate(C); }
  [[nodiscard]] SeriesCertificate sym_m2_certificate(double) const override {
    return detail::convergent(
        [](std::uint64_t J) { return std::ldexp(1.0, -2 * static_cast<int>(std::min<std::uint64_t>(J, 1000))) / 3.0; },
        "terms <= 4^-j");
  }
  [[nodiscard]] bool gt_summable_for_all_eps() const override { return true; }

  [[nodiscard]] SeriesCertificate neq_certificate() const override {
    return detail::convergent(detail::harmonic_tail(2.0), "2pq <= 2/(j+1)^2");
  }

  [[nodiscard]] std::optional<std::vector<LatticeAtom>> atoms(std::uint64_t j, double) const override {
    return std::vector<LatticeAtom>{{Dyadic{}, q(j)}, {Dyadic::pow2(-static_cast<long long>(j)), p(j)}};
  }
  [[nodiscard]] std::optional<Dyadic> anchor(std::uint64_t j) const override {
    return Dyadic::pow2(-static_cast<long long>(j));
  }
  [[nodiscard]] TailBound anchor_deviation_bound() const override { return detail::harmonic_tail(1.0); }
  [[nodiscard]] std::optional<Dyadic> sure_tail_bound(std::uint64_t J) const override {
    return Dyadic::pow2(-static_cast<long long>(J));
  }
};

/// X_j on {1, 2, ...} with P(X_j = k) = p (1-p)^{k-1}, p = 1 - 1/(j+1)^2.
class GeometricCounter final : public WaitingFamily {
 public:
  [[nodiscard]] std::string canonical() const override { return "geometric_counter{}"; }
  [[nodiscard]] SupportKind support_kind() const override { return SupportKind::integer_lattice; }

  static double p(std::uint64_t j) { return 1.0 - detail::inv_sq(j); }
  static double s(std::uint64_t j) { return detail::inv_sq(j); }

  [[nodiscard]] double sample(std::uint64_t j, Rng& rng) const override {
    return static_cast<double>(draw(j, rng));
  }
  [[nodiscard]] Dyadic sample_exact(std::uint64_t j, Rng& rng) const override { return Dyadic(draw(j, rng)); }

  [[nodiscard]] Analytic tail(std::uint64_t j, double C) const override {
    if (C < 0.0) return 1.0;
    if (std::isinf(C)) return 0.0;
    return std::pow(s(j), std::floor(C));
  }
  [[nodiscard]] Analytic prob_gt(std::uint64_t j, double eps) const override { return tail(j, eps); }
  [[nodiscard]] Analytic diag(std::uint64_t j) const override { return p(j) / (2.0 - p(j)); }
  [[nodiscard]] Analytic trunc_mean(std::uint64_t j, double C) const override {
    if (C < 1.0) return 0.0;
    const double pj = p(j);
    if (std::isinf(C)) return 1.0 / pj;
    const double K = std::floor(C);
    return (1.0 - std::pow(s(j), K) * (1.0 + K * pj)) / pj;
  }
  [[nodiscard]] Analytic sym_tail(std::uint64_t j, double C) const override {
    if (C < 0.0) return 1.0;
    if (std::isinf(C)) return 0.0;
    return 2.0 * std::pow(s(j), std::floor(C) + 1.0) / (2.0 - p(j));
  }
  [[nodiscard]] Analytic sym_m2(std::uint64_t j, double C) const override {
    const double pj = p(j);
    const double sj = s(j);
    if (std::isinf(C)) return 2.0 * sj / (pj * pj);
    // P(|Z| = d) = 2 p s^d / (2 - p) for d >= 1
    double acc = 0.0;
    double sd = 1.0;
    for (double d = 1.0; d <= C; d += 1.0) {
      sd *= sj;
      const double term = d * d * sd;
      acc += term;
      if (term < 1e-18 * acc) break;
    }
    return 2.0 * pj / (2.0 - pj) * acc;
  }

  [[nodiscard]] SeriesCertificate tail_certificate(double C) const override {
    if (C < 1.0) return detail::divergent_constant(1.0, "X_j >= 1 surely");
    return detail::convergent(detail::harmonic_tail(1.0), "P(X_j > C) <= 1/(j+1)^2");
  }
  [[nodiscard]] SeriesCertificate trunc_mean_certificate(double C) const override {
    if (C < 1.0) return detail::convergent([](std::uint64_t) { return 0.0; }, "no mass at or below C");
    return detail::divergent_constant(0.75, "E[X_j; X_j <= C] >= P(X_j = 1) >= 3/4");
  }
  [[nodiscard]] SeriesCertificate sym_tail_certificate(double) const override {
    return detail::convergent(detail::harmonic_tail(2.0), "P(|Z| > C) <= 2(1-p)");
  }
  [[nodiscard]] SeriesCertificate sym_m2_certificate(double) const override {
    return detail::convergent(detail::harmonic_tail(32.0 / 9.0), "E Z^2 = 2(1-p)/p^2 <= (32/9)/(j+1)^2");
  }
  [[nodiscard]] SeriesCertificate gt_certificate(double eps) const override { return tail_certificate(eps); }
  [[nodiscard]] bool gt_summable_for_all_eps() const override { return false; }

  [[nodiscard]] SeriesCertificate neq_certificate() const override {
    return detail::convergent(detail::harmonic_tail(2.0), "1 - diag = 2/((j+1)^2 + 1)");
  }

  [[nodiscard]] std::optional<std::vector<LatticeAtom>> atoms(std::uint64_t j, double cutoff) const override {
    std::vector<LatticeAtom> out;
    const double pj = p(j);
    double mass = pj;
    for (long long k = 1; k == 1 || mass >= cutoff; ++k, mass *= s(j)) {
      if (mass <= 0.0) break;
      out.push_back({Dyadic(k), mass});
    }
    return out;
  }
  [[nodiscard]] std::optional<Dyadic> anchor(std::uint64_t) const override { return Dyadic(1); }
  [[nodiscard]] TailBound anchor_deviation_bound() const override { return detail::harmonic_tail(1.0); }

 private:
  static long long draw(std::uint64_t j, Rng& rng) {
    std::geometric_distribution<long long> g(p(j));
    return g(rng) + 1;
  }
};

}  // namespace cgp
