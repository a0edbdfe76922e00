#include <gtest/gtest.h>

#include <numeric>
#include <sstream>
#include <vector>

#include "cgp/engine/ballsbins.hpp"
#include "cgp/engine/catch_up.hpp"
#include "cgp/engine/race.hpp"
#include "cgp/engine/simulate.hpp"
#include "cgp/families/dsl.hpp"

using namespace cgp;

namespace {

ProcessConfig config(const char* family, std::vector<std::uint64_t> init, std::uint64_t N, NumericMode mode,
                     std::uint64_t seed) {
  ProcessConfig c;
  c.family = parse_waiting(family);
  c.initial = std::move(init);
  c.horizon = N;
  c.mode = mode;
  c.seed = seed;
  return c;
}

void expect_consistent(const Trajectory& t) {
  auto values = t.initial_values;
  std::uint64_t n = t.initial_total();
  double last_tau = -1.0;
  for (const auto& e : t.events) {
    ASSERT_FALSE(e.jump_set.empty());
    for (auto a : e.jump_set) ++values[a];
    n += e.jump_set.size();
    EXPECT_EQ(e.n, n);
    EXPECT_EQ(e.values, values);
    EXPECT_GE(e.tau.to_double(), last_tau);
    last_tau = e.tau.to_double();
  }
  EXPECT_EQ(t.final_values, values);
  EXPECT_GE(n, t.initial_total() + t.horizon);
}

}  // namespace

TEST(TimePoint, Rendering) {
  EXPECT_EQ(TimePoint(0.5).str(), "0.5");
  EXPECT_EQ(TimePoint(Dyadic::from_parts(3, 4)).str(), "3/2^4");
  EXPECT_TRUE(TimePoint(Dyadic(1)).exact());
  EXPECT_EQ(TimePoint(Dyadic::from_parts(3, 2)).to_double(), 0.75);
}

TEST(Simulate, FloatTrajectoryIsConsistentAndReproducible) {
  const auto cfg = config("power_exponential{p=0.75}", {1, 2, 1}, 2000, NumericMode::float_mode, 42);
  const auto a = simulate_embedded(cfg);
  const auto b = simulate_embedded(cfg);
  expect_consistent(a);
  ASSERT_EQ(a.events.size(), b.events.size());
  for (std::size_t i = 0; i < a.events.size(); ++i) EXPECT_EQ(a.events[i].tau, b.events[i].tau);
  EXPECT_EQ(a.tie_count, 0U);
  EXPECT_EQ(a.events.back().n, 4U + 2000U);
}

TEST(Simulate, ExactModeGroupsTies) {
  const auto t = simulate_embedded(config("two_point_counter{}", {0, 0}, 60, NumericMode::exact_dyadic, 1));
  expect_consistent(t);
  EXPECT_GT(t.tie_count, 0U);
  for (const auto& e : t.events) EXPECT_TRUE(e.tau.exact());
}

TEST(Simulate, DeterministicFamilyMovesInLockstep) {
  const auto t = simulate_embedded(config("const_table{x1=1,x2=0.5,ratio=0.5}", {0, 0}, 10, NumericMode::exact_dyadic, 9));
  expect_consistent(t);
  for (const auto& e : t.events) {
    EXPECT_EQ(e.jump_set.size(), 2U);
    EXPECT_EQ(e.values[0], e.values[1]);
  }
}

TEST(Simulate, IntegerModeForGeometric) {
  const auto t = simulate_embedded(config("geometric_counter{}", {0, 0}, 50, NumericMode::exact_integer, 4));
  expect_consistent(t);
  for (const auto& e : t.events) EXPECT_EQ(e.tau.dyadic().exponent(), 0U);
}

TEST(Simulate, ModeValidation) {
  EXPECT_THROW(simulate_embedded(config("two_point_counter{}", {1, 1}, 5, NumericMode::float_mode, 0)),
               PreconditionError);
  EXPECT_THROW(simulate_embedded(config("power_exponential{p=1}", {1, 1}, 5, NumericMode::exact_dyadic, 0)),
               PreconditionError);
  EXPECT_THROW(simulate_embedded(config("two_point_counter{}", {1, 1}, 5, NumericMode::exact_integer, 0)),
               PreconditionError);
  EXPECT_THROW(simulate_embedded(config("power_exponential{p=1}", {1}, 5, NumericMode::float_mode, 0)),
               PreconditionError);
}

TEST(Simulate, ZeroWaitOvershootIsBounded) {
  auto cfg = config("const_table{scale=0}", {0, 0}, 5, NumericMode::exact_dyadic, 0);
  cfg.max_group_overshoot = 100;
  EXPECT_THROW(simulate_embedded(cfg), ResourceError);
}

TEST(Simulate, ExportUsesExactRendering) {
  const auto t = simulate_embedded(config("two_point_counter{}", {0, 0}, 4, NumericMode::exact_dyadic, 3));
  std::ostringstream os;
  export_trajectory(t, os);
  const std::string s = os.str();
  EXPECT_NE(s.find("\"tau\":\""), std::string::npos);
  EXPECT_NE(s.find("/2^"), std::string::npos);
  EXPECT_EQ(std::count(s.begin(), s.end(), '\n'), static_cast<long>(t.events.size()));
}

TEST(Proxies, HierarchyHoldsOnRandomTrajectories) {
  for (const auto* fam : {"power_exponential{p=0}", "power_exponential{p=0.75}", "power_exponential{p=1.5}"}) {
    for (std::uint64_t seed = 0; seed < 150; ++seed) {
      const auto t = simulate_embedded(config(fam, {1, 1, 2}, 300, NumericMode::float_mode, seed));
      for (double beta : {0.1, 0.5, 0.9}) {
        const auto p = detect_events(t, beta);
        EXPECT_TRUE(!p.monopoly_proxy || p.strict_leader_stable);
        EXPECT_TRUE(!p.strict_leader_stable || p.leader_stable);
        EXPECT_TRUE(!p.strict_leader_stable || !p.tie_in_window);
      }
    }
  }
  for (std::uint64_t seed = 0; seed < 200; ++seed) {
    const auto t = simulate_embedded(config("two_point_counter{}", {0, 0}, 60, NumericMode::exact_dyadic, seed));
    const auto p = detect_events(t, 0.5);
    EXPECT_TRUE(!p.monopoly_proxy || p.strict_leader_stable);
    EXPECT_TRUE(!p.strict_leader_stable || p.leader_stable);
  }
}

TEST(Proxies, HandBuiltTrajectory) {
  const std::vector<std::uint64_t> init{0, 0};
  EventProxyTracker t(init, 4, 0.5);
  const std::vector<std::uint32_t> a0{0}, a1{1};
  t.observe(1, a1, std::vector<std::uint64_t>{0, 1});
  t.observe(2, a0, std::vector<std::uint64_t>{1, 1});
  t.observe(3, a0, std::vector<std::uint64_t>{2, 1});
  t.observe(4, a0, std::vector<std::uint64_t>{3, 1});
  const auto p = t.result();
  EXPECT_EQ(p.window_start, 2U);
  EXPECT_TRUE(p.leader_stable);
  EXPECT_TRUE(p.strict_leader_stable);
  EXPECT_TRUE(p.monopoly_proxy);
  EXPECT_EQ(p.last_tie_step, 2U);
  EXPECT_EQ(p.last_lead_change_step, 2U);
  EXPECT_EQ(p.last_loser_jump_step, 1U);
  EXPECT_FALSE(p.tie_in_window);
}

TEST(BallsBins, PolyaEnumerationIsUniform) {
  // f(j) = j, start (1, 1): every count of urn-0 draws in 3 steps has probability 1/4.
  const AffineFeedback polya(1.0, 0.0);
  const std::vector<std::uint64_t> init{1, 1};
  std::vector<BigRational> by_count(4, BigRational(0));
  BigRational total(0);
  for (unsigned mask = 0; mask < 8; ++mask) {
    std::vector<std::uint32_t> picks;
    unsigned zeros = 0;
    for (int i = 0; i < 3; ++i) {
      const std::uint32_t a = (mask >> i) & 1U;
      picks.push_back(a);
      zeros += a == 0;
    }
    const auto p = chain_prefix_prob(polya, init, picks);
    by_count[zeros] += p;
    total += p;
  }
  EXPECT_EQ(total, BigRational(1));
  for (const auto& p : by_count) EXPECT_EQ(p, BigRational(1, 4));
}

TEST(BallsBins, RandomFeedbackRejectedForExactProbabilities) {
  const RandomPowerFeedback fb(1.0, 1.0, 2.0);
  const std::vector<std::uint64_t> init{1, 1};
  const std::vector<std::uint32_t> picks{0};
  EXPECT_THROW(chain_prefix_prob(fb, init, picks), PreconditionError);
}

TEST(BallsBins, TrajectoryConsistency) {
  const PowerFeedback fb(1.0);
  const std::vector<std::uint64_t> init{1, 3};
  const auto t = simulate_ballsbins(fb, init, 500, 8);
  expect_consistent(t);
  EXPECT_EQ(t.events.size(), 500U);
  EXPECT_THROW(simulate_ballsbins(fb, std::vector<std::uint64_t>{0, 1}, 5, 0), PreconditionError);
}

TEST(Race, DeterministicFamilyTiesExactly) {
  const auto fam = parse_waiting("const_table{x1=1,x2=0.5,ratio=0.5}");
  const auto tie = explosion_race(*fam, std::vector<std::uint64_t>{0, 0});
  EXPECT_EQ(tie.outcome, RaceOutcome::Tie);
  const auto win = explosion_race(*fam, std::vector<std::uint64_t>{0, 1});
  EXPECT_EQ(win.outcome, RaceOutcome::Winner);
  EXPECT_EQ(win.winner, 1U);
}

TEST(Race, TwoPointBoundsBracketTheSum) {
  const auto fam = parse_waiting("two_point_counter{}");
  for (std::uint64_t seed = 0; seed < 50; ++seed) {
    const auto r = explosion_race(*fam, std::vector<std::uint64_t>{0, 0}, RaceOptions{.depth = 40, .seed = seed});
    ASSERT_EQ(r.sigma.size(), 2U);
    for (const auto& s : r.sigma) {
      EXPECT_LE(s.lower, s.upper);
      EXPECT_LE(s.upper, Dyadic(1));
    }
    if (r.outcome == RaceOutcome::Winner) {
      const auto w = *r.winner;
      EXPECT_LT(r.sigma[w].upper, r.sigma[1 - w].lower);
    }
  }
}

TEST(Race, RejectsDivergentAndAtomless) {
  EXPECT_THROW(explosion_race(*parse_waiting("geometric_counter{}"), std::vector<std::uint64_t>{0, 0}),
               PreconditionError);
  EXPECT_THROW(explosion_race(*parse_waiting("power_exponential{p=2}"), std::vector<std::uint64_t>{1, 1}),
               PreconditionError);
}

TEST(CatchUp, TallyCountsAreBounded) {
  const auto fam = parse_waiting("power_exponential{p=1.5}");
  const auto t = catch_up_tally(*fam, 1, 1, 1000, 3);
  EXPECT_EQ(t.checked, 1000U);
  EXPECT_LE(t.events, t.checked);
  const auto g = catch_up_tally(*parse_waiting("geometric_counter{}"), 0, 0, 200, 1);
  // Equal starts with identical first draws make k = 0 a catch-up.
  EXPECT_GE(g.events, 1U);
}
