#include <gtest/gtest.h>

#include <cmath>
#include <string>
#include <vector>

#include "cgp/families/dsl.hpp"
#include "cgp/families/lattice.hpp"

using namespace cgp;

namespace {

double binomial_se(double p, int n) { return std::sqrt(std::max(p * (1.0 - p), 0.0) / n) + 1.0 / n; }

const std::vector<std::string> kWaiting = {
    "power_exponential{p=0.75}",
    "power_exponential{p=2}",
    "power_exponential{p=0}",
    "embed(random_power_feedback{p=1,lo=0.5,hi=2})",
    "embed(affine_feedback{a=1,b=1})",
    "two_point_counter{}",
    "geometric_counter{}",
    "four_adic{}",
    "binomial_blocks{}",
    "uniform_first{}",
    "const_table{x1=0.5,x2=0.25,scale=1,ratio=0.5}",
};

}  // namespace

TEST(Dsl, CanonicalTextRoundTrips) {
  for (const auto& text : kWaiting) {
    const auto f = parse_family(text);
    const std::string canon = render(f);
    EXPECT_EQ(render(parse_family(canon)), canon) << text;
  }
  for (const auto* text : {"power_feedback{p=1.5}", "random_power_feedback{p=0.4,lo=1,hi=3}", "rademacher{}",
                           "rademacher{scale=1,ratio=0.5}", "affine_feedback{a=2,b=1}"}) {
    const std::string canon = render(parse_family(text));
    EXPECT_EQ(render(parse_family(canon)), canon) << text;
  }
}

TEST(Dsl, WhitespaceAndSignsAccepted) {
  EXPECT_EQ(render(parse_family("  power_feedback { p = +2 } ")), "power_feedback{p=2}");
}

TEST(Dsl, ErrorPositions) {
  auto pos = [](const char* text) -> long {
    try {
      parse_family(text);
    } catch (const ParseError& e) {
      return static_cast<long>(e.position());
    }
    return -1;
  };
  EXPECT_EQ(pos("power_exponential{p=}"), 19);   // at '='
  EXPECT_EQ(pos("bogus{}"), 0);                  // unknown ident
  EXPECT_EQ(pos("power_feedback{q=1}"), 15);     // unexpected key
  EXPECT_EQ(pos("power_feedback{}"), 15);        // missing key, at '}'
  EXPECT_EQ(pos("power_feedback{p=1,p=2}"), 19); // duplicate key
  EXPECT_EQ(pos("power_feedback{p=abc}"), 16);   // non-numeric
  EXPECT_EQ(pos("power_feedback{p=1} x"), 20);   // trailing text
  EXPECT_EQ(pos("power_feedback{p=-1}"), 0);     // constructor rejects negative exponent
  EXPECT_EQ(pos("embed(two_point_counter{})"), 6);
}

TEST(Dsl, KindAccessors) {
  EXPECT_THROW(parse_waiting("power_feedback{p=1}"), PreconditionError);
  EXPECT_THROW(parse_feedback("two_point_counter{}"), PreconditionError);
  EXPECT_NO_THROW(as_law(parse_family("power_feedback{p=1}")));
}

TEST(Families, SampledTailMatchesAnalytic) {
  constexpr int n = 100000;
  for (const auto& text : kWaiting) {
    const auto fam = parse_waiting(text);
    Rng rng(17);
    for (std::uint64_t j : {1U, 3U, 10U}) {
      std::vector<double> xs(n);
      for (auto& x : xs) x = fam->sample(j, rng);
      for (double C : {0.05, 0.3, 1.0, 2.5}) {
        const auto t = fam->tail(j, C);
        ASSERT_TRUE(t.has_value()) << text;
        double hits = 0;
        for (double x : xs) hits += x > C;
        EXPECT_NEAR(hits / n, *t, 4 * binomial_se(*t, n)) << text << " j=" << j << " C=" << C;

        const auto m = fam->trunc_mean(j, C);
        ASSERT_TRUE(m.has_value()) << text;
        double s = 0, s2 = 0;
        for (double x : xs) {
          const double y = x <= C ? x : 0.0;
          s += y;
          s2 += y * y;
        }
        const double mean = s / n;
        const double se = std::sqrt(std::max(s2 / n - mean * mean, 0.0) / n) + 1e-12;
        EXPECT_NEAR(mean, *m, 4 * se + 1e-12) << text << " trunc_mean j=" << j << " C=" << C;
      }
    }
  }
}

TEST(Families, SampledSymmetrizedMomentsMatchAnalytic) {
  constexpr int n = 100000;
  for (const auto& text : kWaiting) {
    const auto fam = parse_waiting(text);
    Rng rng(23);
    for (std::uint64_t j : {1U, 4U}) {
      for (double C : {0.25, 1.0}) {
        const auto t = fam->sym_tail(j, C);
        const auto m2 = fam->sym_m2(j, C);
        ASSERT_TRUE(t && m2) << text;
        double hits = 0, s = 0, s2 = 0;
        for (int i = 0; i < n; ++i) {
          const double z = fam->sample(j, rng) - fam->sample(j, rng);
          hits += std::fabs(z) > C;
          const double y = std::fabs(z) <= C ? z * z : 0.0;
          s += y;
          s2 += y * y;
        }
        EXPECT_NEAR(hits / n, *t, 4 * binomial_se(*t, n)) << text << " j=" << j << " C=" << C;
        const double mean = s / n;
        EXPECT_NEAR(mean, *m2, 4 * std::sqrt(std::max(s2 / n - mean * mean, 0.0) / n) + 1e-12)
            << text << " sym_m2 j=" << j << " C=" << C;
      }
    }
  }
}

TEST(Families, EmpiricalDiagMatchesForLattices) {
  constexpr int n = 100000;
  for (const auto* text : {"two_point_counter{}", "geometric_counter{}", "four_adic{}", "binomial_blocks{}",
                           "const_table{x1=1,x2=0.5}"}) {
    const auto fam = parse_waiting(text);
    Rng rng(5);
    for (std::uint64_t j : {1U, 2U, 5U}) {
      double eq = 0;
      for (int i = 0; i < n; ++i) eq += fam->sample_exact(j, rng) == fam->sample_exact(j, rng);
      const double d = *fam->diag(j);
      EXPECT_NEAR(eq / n, d, 4 * binomial_se(d, n)) << text << " j=" << j;
    }
  }
}

TEST(Families, GeometricDiagAgainstDirectSummation) {
  const GeometricCounter g;
  for (std::uint64_t j = 1; j <= 9; ++j) {
    const double p = GeometricCounter::p(j);
    double direct = 0.0;
    for (int k = 1; k < 2000; ++k) direct += p * p * std::pow(1 - p, 2.0 * (k - 1));
    EXPECT_NEAR(*g.diag(j), direct, 1e-15);
  }
}

TEST(Families, GeometricExceedsAnySmallEpsilon) {
  const GeometricCounter g;
  for (std::uint64_t j : {1U, 10U, 1000U}) {
    for (double eps : {0.0, 0.01, 0.5, 0.999}) EXPECT_EQ(*g.prob_gt(j, eps), 1.0);
  }
}

TEST(Families, EmbeddedFamilyIsAtomless) {
  const auto f = parse_waiting("power_exponential{p=1}");
  EXPECT_EQ(f->support_kind(), SupportKind::atomless);
  EXPECT_EQ(*f->diag(1), 0.0);
  // X_j ~ Exp(F(j-1)) with F(j-1) = j: mean 1/j.
  Rng rng(1);
  double s = 0;
  constexpr int n = 200000;
  for (int i = 0; i < n; ++i) s += f->sample(4, rng);
  EXPECT_NEAR(s / n, 0.25, 4 * 0.25 / std::sqrt(n));
}

TEST(Feedback, RandomPowerClosedFormsAgainstQuadratureAndSampling) {
  const RandomPowerFeedback fb(0.5, 0.5, 2.0);
  for (std::uint64_t j : {0U, 3U, 50U}) {
    EXPECT_NEAR(fb.m1inv(j), fb.expect(j, [](double F) { return 1.0 / F; }), 1e-12);
    for (double eta : {0.5, 1.0, 3.0}) {
      // Gauss rules converge slowly across the indicator's jump, so use a fine midpoint rule.
      const double a = std::pow(static_cast<double>(j) + 1.0, 0.5);
      constexpr int cells = 1000000;
      double mid = 0;
      for (int i = 0; i < cells; ++i) {
        const double F = a * (0.5 + 1.5 * (i + 0.5) / cells);
        mid += F > eta ? 1.0 / (F * F) : 0.0;
      }
      EXPECT_NEAR(fb.m2inv(j, eta), mid / cells, 1e-5);
      Rng rng(j + 1);
      double hits = 0;
      constexpr int n = 100000;
      for (int i = 0; i < n; ++i) hits += fb.sample_F(j, rng) <= eta;
      const double p = fb.p_leq(j, eta);
      EXPECT_NEAR(hits / n, p, 4 * binomial_se(p, n));
    }
    const auto s = fb.sandwich();
    const double k = static_cast<double>(j + 1);
    Rng rng(9);
    for (int i = 0; i < 1000; ++i) {
      const double F = fb.sample_F(j, rng);
      EXPECT_GE(F, s.lo * std::pow(k, s.power) * (1 - 1e-12));
      EXPECT_LE(F, s.hi * std::pow(k, s.power) * (1 + 1e-12));
    }
  }
}

TEST(Feedback, DeterministicValues) {
  const PowerFeedback pf(2.0);
  EXPECT_EQ(*pf.value(0), 1.0);
  EXPECT_EQ(*pf.value(2), 9.0);
  EXPECT_EQ(pf.p_leq(2, 9.0), 1.0);
  EXPECT_EQ(pf.p_leq(2, 8.9), 0.0);
  const AffineFeedback polya(1.0, 0.0);
  EXPECT_EQ(*polya.value(3), 3.0);
}

TEST(Lattice, ExactSamplesAgreeWithDoubles) {
  for (const auto* text : {"two_point_counter{}", "four_adic{}", "binomial_blocks{}", "geometric_counter{}"}) {
    const auto fam = parse_waiting(text);
    Rng a(3), b(3);
    for (std::uint64_t j = 1; j < 60; ++j) EXPECT_EQ(fam->sample_exact(j, a).to_double(), fam->sample(j, b)) << text;
  }
}

TEST(Lattice, SureTailBoundsHold) {
  for (const auto* text : {"two_point_counter{}", "four_adic{}", "const_table{x1=3,ratio=0.5}"}) {
    const auto fam = parse_waiting(text);
    for (std::uint64_t J : {2U, 10U}) {
      const auto bound = fam->sure_tail_bound(J);
      ASSERT_TRUE(bound) << text;
      // Largest possible tail, summed exactly over a long stretch.
      Dyadic worst;
      for (std::uint64_t j = J + 1; j <= J + 200; ++j) {
        const auto at = fam->atoms(j, 0.0);
        ASSERT_TRUE(at);
        Dyadic m;
        for (const auto& x : *at) m = std::max(m, x.value);
        worst += m;
      }
      EXPECT_LE(worst, *bound) << text << " J=" << J;
    }
  }
}

TEST(Lattice, RademacherIsSymmetric) {
  const Rademacher r(1.0, 0.5);
  EXPECT_FALSE(r.nonnegative());
  EXPECT_EQ(*r.diag(3), 0.5);
  const auto at = r.atoms(3, 0.0);
  ASSERT_TRUE(at);
  ASSERT_EQ(at->size(), 2U);
  EXPECT_EQ((*at)[0].value + (*at)[1].value, Dyadic{});
}
