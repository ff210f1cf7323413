#include <gtest/gtest.h>

#include <taplab/adversaries.hpp>
#include <taplab/errors.hpp>
#include <taplab/generators.hpp>
#include <taplab/registry.hpp>
#include <taplab/sched_awake.hpp>
#include <taplab/tap_json.hpp>

using namespace taplab;

TEST(Generators, RandomIsDeterministic) {
  GenParams g;
  g.p = 8;
  g.n = 12;
  g.seed = 42;
  g.arrivals = ArrivalPattern::PoissonLike;
  EXPECT_EQ(tap_to_json(gen_random(g)), tap_to_json(gen_random(g)));
  g.n = 0;
  EXPECT_TRUE(gen_random(g).tasks.empty());
}

TEST(Generators, GeometricShape) {
  const Tap tap = gen_geometric(4);
  ASSERT_EQ(tap.tasks.size(), 4u);
  EXPECT_EQ(tap.tasks[0].sigma, Rational(2));
  EXPECT_EQ(tap.tasks[0].pi, Rational(4));
  EXPECT_EQ(tap.tasks[1].pi, Rational(8));
  EXPECT_EQ(tap.tasks[2].pi, Rational(16));
  EXPECT_EQ(tap.tasks[3].pi, Rational(16));
  EXPECT_LT(tap.tasks[0].arrival, tap.tasks[1].arrival);
}

TEST(Generators, FixedFamilies) {
  const auto [a, b] = gen_oblivious_pair(16);
  EXPECT_EQ(a.tasks.size(), 4u);
  EXPECT_EQ(b.tasks.size(), 4u);
  EXPECT_EQ(gen_mrt_cheap_expensive(16, 1).tasks.size(), 6u);
  EXPECT_EQ(gen_dtap_levels(16, 1).tasks.size(), 16u);
  EXPECT_THROW(gen_emergency(6, 1, 2, 0), InvalidArgument);
  for (const std::string& name : generator_names()) EXPECT_FALSE(name.empty());
}

TEST(Golden, ParallelStartProvokesInjection) {
  const DuelResult d = run_duel("golden", 4, RunConfig{"mwf-all-parallel"});
  EXPECT_TRUE(d.injected);
  EXPECT_TRUE(d.run.violations.empty());
  EXPECT_EQ(d.run.metrics.n, 4u);
  EXPECT_GE(d.ratio, Rational(3, 2));
}

TEST(Golden, SerialStartIsLeftAlone) {
  const DuelResult d = run_duel("golden", 4, RunConfig{"mwf-all-serial"});
  EXPECT_FALSE(d.injected);
  EXPECT_TRUE(d.opt_exact);
  EXPECT_EQ(d.ratio, golden_hat());
}

TEST(Golden, BalanceLosesAtLeastTheGoldenRatio) {
  const DuelResult d = run_duel("golden", 20, RunConfig{"bal"});
  EXPECT_GE(d.ratio.to_double(), 1.6);
}

TEST(Nonpreemptive, NoInjectionWithZeroMultiplier) {
  const DuelResult d = run_duel("nonpreemptive", 16, RunConfig{"rigid"}, 0);
  EXPECT_FALSE(d.injected);
  EXPECT_EQ(d.run.metrics.n, 1u);
  EXPECT_EQ(d.ratio, Rational(1));
}

TEST(Nonpreemptive, RigidRatioGrowsWithMultiplier) {
  const DuelResult low = run_duel("nonpreemptive", 16, RunConfig{"rigid"}, 10);
  const DuelResult high = run_duel("nonpreemptive", 16, RunConfig{"rigid"}, 100);
  EXPECT_TRUE(low.injected);
  EXPECT_TRUE(high.run.violations.empty());
  EXPECT_GT(high.ratio, Rational(5) * low.ratio);
}

TEST(Nonpreemptive, ProbeBoundMustBePositive) {
  EXPECT_THROW(NonpreemptiveAdversary(10, Tap{4, {}}), InvalidArgument);
  NonpreemptiveAdversary adv(10, nonpreemptive_probe(8));
  EXPECT_EQ(adv.probe_bound(), Rational(1));
  EXPECT_FALSE(adv.triggered());
}

TEST(Duel, UnknownAdversaryIsRejected) {
  EXPECT_THROW(run_duel("nobody", 4, RunConfig{"bal"}), InvalidArgument);
}
