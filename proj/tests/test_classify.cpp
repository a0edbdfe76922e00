#include <gtest/gtest.h>

#include <vector>

#include "cgp/classify/classify.hpp"
#include "cgp/families/dsl.hpp"
#include "cgp/families/embedding.hpp"
#include "cgp/families/feedback.hpp"

using namespace cgp;

namespace {

const std::vector<std::uint64_t> kEqual{1, 1};
const std::vector<std::uint64_t> kZero{0, 0};

class Opaque final : public WaitingFamily {
 public:
  std::string canonical() const override { return "opaque"; }
  SupportKind support_kind() const override { return SupportKind::atomless; }
  double sample(std::uint64_t, Rng&) const override { return 1.0; }
};

}  // namespace

TEST(Classify, BallsBinsPhaseTable) {
  for (double p : {0.25, 0.4, 0.5, 0.6, 0.75, 1.0, 1.5, 2.0}) {
    const auto v = classify_ballsbins(PowerFeedback(p));
    EXPECT_EQ(v.monopoly.outcome, p > 1 ? Outcome::AlmostSurely : Outcome::AlmostNever) << p;
    EXPECT_EQ(v.strict.outcome, p > 0.5 ? Outcome::AlmostSurely : Outcome::AlmostNever) << p;
  }
}

TEST(Classify, EmbeddedPowerAgreesWithBallsBins) {
  for (double p : {0.25, 0.5, 0.6, 1.0, 1.5}) {
    const auto fb = std::make_shared<PowerFeedback>(p);
    const EmbeddedFamily fam(fb);
    const auto bb = classify_ballsbins(*fb);
    EXPECT_EQ(classify_leadership(fam).outcome, p > 0.5 ? Outcome::AlmostSurely : Outcome::AlmostNever) << p;
    EXPECT_EQ(classify_monopoly(fam, kEqual).outcome, bb.monopoly.outcome) << p;
    EXPECT_EQ(classify_strict(fam, kEqual).outcome, bb.strict.outcome) << p;
  }
}

TEST(Classify, RandomFeedbackUsesSandwich) {
  const auto hi = classify_ballsbins(RandomPowerFeedback(1.5, 0.5, 2.0));
  EXPECT_EQ(hi.monopoly.outcome, Outcome::AlmostSurely);
  EXPECT_EQ(hi.strict.outcome, Outcome::AlmostSurely);
  const auto lo = classify_ballsbins(RandomPowerFeedback(0.4, 0.5, 2.0));
  EXPECT_EQ(lo.monopoly.outcome, Outcome::AlmostNever);
  EXPECT_EQ(lo.strict.outcome, Outcome::AlmostNever);
}

TEST(Classify, PolyaUrn) {
  const auto v = classify_ballsbins(AffineFeedback(1.0, 0.0));
  EXPECT_EQ(v.monopoly.outcome, Outcome::AlmostNever);
  EXPECT_EQ(v.strict.outcome, Outcome::AlmostSurely);
}

TEST(Classify, CounterexamplesAreNotDecided) {
  const auto two = parse_waiting("two_point_counter{}");
  EXPECT_EQ(classify_leadership(*two).outcome, Outcome::AlmostSurely);
  EXPECT_EQ(classify_monopoly(*two, kZero).outcome, Outcome::Undetermined);

  const auto geo = parse_waiting("geometric_counter{}");
  EXPECT_EQ(classify_leadership(*geo).outcome, Outcome::AlmostSurely);
  EXPECT_EQ(classify_monopoly(*geo, kZero).outcome, Outcome::AlmostNever);
  const auto s = classify_strict(*geo, kZero);
  EXPECT_EQ(s.outcome, Outcome::Undetermined);
  EXPECT_FALSE(s.warnings.empty());
}

TEST(Classify, AtomlessTermPastThresholdDecidesMonopoly) {
  // uniform_first has an atomless first term; it only counts when no agent has passed it.
  const auto f = parse_waiting("uniform_first{}");
  EXPECT_EQ(classify_monopoly(*f, kZero).outcome, Outcome::AlmostSurely);
  EXPECT_EQ(classify_monopoly(*f, std::vector<std::uint64_t>{1, 1}).outcome, Outcome::Undetermined);
}

TEST(Classify, NeverOutputsPositiveNondegenerate) {
  for (const auto* text : {"two_point_counter{}", "geometric_counter{}", "four_adic{}", "binomial_blocks{}",
                           "power_exponential{p=0.7}", "uniform_first{}"}) {
    const auto f = parse_waiting(text);
    EXPECT_NE(classify_leadership(*f).outcome, Outcome::PositiveNondegenerate);
    EXPECT_NE(classify_strict(*f, kZero).outcome, Outcome::PositiveNondegenerate);
    EXPECT_NE(classify_monopoly(*f, kZero).outcome, Outcome::PositiveNondegenerate);
  }
}

TEST(Classify, UnknownAnalyticsDegrade) {
  const Opaque o;
  EXPECT_EQ(classify_leadership(o).outcome, Outcome::Undetermined);
  EXPECT_EQ(classify_monopoly(o, kEqual).outcome, Outcome::Undetermined);
  EXPECT_EQ(classify_strict(o, kEqual).outcome, Outcome::Undetermined);
}

TEST(Classify, VerdictJson) {
  const auto v = classify_strict(*parse_waiting("power_exponential{p=0.75}"), kEqual);
  const auto j = to_json(v);
  EXPECT_EQ(j["event"], "StrictLeadership");
  EXPECT_EQ(j["outcome"], "AlmostSurely");
  EXPECT_FALSE(j["evidence"].empty());
  EXPECT_EQ(j["epsilon_grid"].size(), 3U);
}

TEST(Classify, Preconditions) {
  EXPECT_THROW(classify_monopoly(*parse_waiting("two_point_counter{}"), std::vector<std::uint64_t>{1}),
               PreconditionError);
  EXPECT_THROW(classify_ballsbins(PowerFeedback(1.0), {0.0}), std::invalid_argument);
}
