#pragma once

#include <charconv>
#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <random>
#include <stdexcept>
#include <string>
#include <vector>

#include "cgp/numerics/dyadic.hpp"
#include "cgp/numerics/series_eval.hpp"

namespace cgp {

using Rng = std::mt19937_64;

/// Shortest text that reads back to the same double.
inline std::string format_number(double x) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, x);
  return std::string(buf, res.ptr);
}

/// Value of an analytic callback; nullopt means no closed form is known.
using Analytic = std::optional<double>;

enum class SupportKind { atomless, dyadic_lattice, integer_lattice };

inline const char* to_string(SupportKind k) {
  switch (k) {
    case SupportKind::atomless: return "atomless";
    case SupportKind::dyadic_lattice: return "dyadic_lattice";
    case SupportKind::integer_lattice: return "integer_lattice";
  }
  return "?";
}

struct LatticeAtom {
  Dyadic value;
  double mass = 0.0;
};

/// A distribution-valued sequence j -> law of Y_j, j >= 1.
///
/// Analytic callbacks return nullopt where no closed form is wired; the
/// classifiers degrade to Undetermined instead of guessing.
class IndexedLaw {
 public:
  virtual ~IndexedLaw() = default;

  [[nodiscard]] virtual std::string canonical() const = 0;
  [[nodiscard]] virtual SupportKind support_kind() const = 0;
  [[nodiscard]] virtual bool nonnegative() const { return true; }
  /// Every Y_j is a point mass.
  [[nodiscard]] virtual bool deterministic() const { return false; }

  [[nodiscard]] virtual double sample(std::uint64_t j, Rng& rng) const = 0;
  [[nodiscard]] virtual Dyadic sample_exact(std::uint64_t j, Rng& rng) const {
    (void)j;
    (void)rng;
    throw std::logic_error(canonical() + ": no exact sampler for atomless laws");
  }

  /// P(Y_j > C)
  [[nodiscard]] virtual Analytic tail(std::uint64_t j, double C) const {
    (void)j;
    (void)C;
    return std::nullopt;
  }
  /// P(Y_j = Y'_j) for independent copies.
  [[nodiscard]] virtual Analytic diag(std::uint64_t j) const {
    (void)j;
    return std::nullopt;
  }
  /// E[Y_j 1{Y_j <= C}]
  [[nodiscard]] virtual Analytic trunc_mean(std::uint64_t j, double C) const {
    (void)j;
    (void)C;
    return std::nullopt;
  }

  /// Certificate for sum_j (1 - diag(j)).
  [[nodiscard]] virtual SeriesCertificate neq_certificate() const { return {}; }

  /// Finite support of Y_j down to mass_cutoff; the remaining mass is implied.
  [[nodiscard]] virtual std::optional<std::vector<LatticeAtom>> atoms(std::uint64_t j, double mass_cutoff) const {
    (void)j;
    (void)mass_cutoff;
    return std::nullopt;
  }
  /// Reference value a_j for Y_j (its most likely value).
  [[nodiscard]] virtual std::optional<Dyadic> anchor(std::uint64_t j) const {
    (void)j;
    return std::nullopt;
  }
  /// Bound on sum_{j>J} P(Y_j != anchor(j)).
  [[nodiscard]] virtual TailBound anchor_deviation_bound() const { return {}; }
  /// Bound on sum_{j>J} Y_j that holds for every outcome.
  [[nodiscard]] virtual std::optional<Dyadic> sure_tail_bound(std::uint64_t J) const {
    (void)J;
    return std::nullopt;
  }
};

/// Waiting-time family X_j >= 0 with analytics on symmetrized differences.
class WaitingFamily : public IndexedLaw {
 public:
  /// P(|X_j - X'_j| > C)
  [[nodiscard]] virtual Analytic sym_tail(std::uint64_t j, double C) const {
    (void)j;
    (void)C;
    return std::nullopt;
  }
  /// E[(X_j - X'_j)^2 1{|X_j - X'_j| <= C}], C may be +infinity.
  [[nodiscard]] virtual Analytic sym_m2(std::uint64_t j, double C) const {
    (void)j;
    (void)C;
    return std::nullopt;
  }
  /// P(X_j > eps)
  [[nodiscard]] virtual Analytic prob_gt(std::uint64_t j, double eps) const { return tail(j, eps); }

  [[nodiscard]] virtual SeriesCertificate tail_certificate(double C) const {
    (void)C;
    return {};
  }
  [[nodiscard]] virtual SeriesCertificate trunc_mean_certificate(double C) const {
    (void)C;
    return {};
  }
  [[nodiscard]] virtual SeriesCertificate sym_tail_certificate(double C) const {
    (void)C;
    return {};
  }
  [[nodiscard]] virtual SeriesCertificate sym_m2_certificate(double C) const {
    (void)C;
    return {};
  }
  [[nodiscard]] virtual SeriesCertificate gt_certificate(double eps) const { return tail_certificate(eps); }
  /// True when gt_certificate(eps) carries a finite tail bound for every eps > 0.
  [[nodiscard]] virtual bool gt_summable_for_all_eps() const { return false; }
};

/// Feedback sequence F(j) > 0, j >= 0.
///
/// Series certificates use the shifted index k = j + 1 >= 1, so term k of a
/// feedback series refers to F(k - 1).
class FeedbackFamily {
 public:
  virtual ~FeedbackFamily() = default;

  [[nodiscard]] virtual std::string canonical() const = 0;
  [[nodiscard]] virtual bool deterministic() const = 0;
  [[nodiscard]] virtual double sample_F(std::uint64_t j, Rng& rng) const = 0;
  /// f(j) when deterministic.
  [[nodiscard]] virtual std::optional<double> value(std::uint64_t j) const {
    (void)j;
    return std::nullopt;
  }

  /// P(F(j) <= eta)
  [[nodiscard]] virtual double p_leq(std::uint64_t j, double eta) const = 0;
  /// E[F(j)^-2 1{F(j) > eta}]
  [[nodiscard]] virtual double m2inv(std::uint64_t j, double eta) const = 0;
  /// E[1/F(j)]
  [[nodiscard]] virtual double m1inv(std::uint64_t j) const = 0;
  /// Essential infimum of 1/F(j).
  [[nodiscard]] virtual double inv_lower(std::uint64_t j) const = 0;

  /// E[g(F(j))]; exact for deterministic feedback, Gauss-Legendre otherwise.
  [[nodiscard]] virtual double expect(std::uint64_t j, const std::function<double(double)>& g) const = 0;

  /// Sure sandwich lo * k^power <= F(k-1) <= hi * k^power for k >= from.
  struct PowerSandwich {
    double lo = 1.0;
    double hi = 1.0;
    double power = 0.0;
    std::uint64_t from = 1;
  };
  [[nodiscard]] virtual PowerSandwich sandwich() const = 0;

  /// sum_k E[1/F(k-1)]
  [[nodiscard]] virtual SeriesCertificate m1inv_certificate() const = 0;
  /// sum_k essinf 1/F(k-1)
  [[nodiscard]] virtual SeriesCertificate inv_lower_certificate() const = 0;
  /// sum_k P(F(k-1) <= eta)
  [[nodiscard]] virtual SeriesCertificate small_certificate(double eta) const = 0;
  /// sum_k E[F(k-1)^-2 1{F(k-1) > eta}]
  [[nodiscard]] virtual SeriesCertificate m2inv_certificate(double eta) const = 0;
  /// True when both eta-certificates are convergent for every eta > 0.
  [[nodiscard]] virtual bool eta_summable_for_all() const = 0;
};

using IndexedLawPtr = std::shared_ptr<const IndexedLaw>;
using WaitingFamilyPtr = std::shared_ptr<const WaitingFamily>;
using FeedbackFamilyPtr = std::shared_ptr<const FeedbackFamily>;

}  // namespace cgp
