#include <gtest/gtest.h>

#include <taplab/errors.hpp>
#include <taplab/generators.hpp>
#include <taplab/oracle.hpp>
#include <taplab/sched_awake.hpp>

using namespace taplab;

namespace {

Task task(TaskId id, Rational sigma, Rational pi) { return Task{id, std::move(sigma), std::move(pi), Rational(0), {}}; }

const Decision S = Decision::Serial;
const Decision P = Decision::Parallel;

}  // namespace

TEST(GivenDecisions, SingleGoldenTask) {
  const Tap tap{4, {task(0, golden_hat(), Rational(4))}};
  EXPECT_EQ(opt_awake_given_decisions(tap, std::vector<Decision>{P}), Rational(1));
  EXPECT_EQ(opt_awake_given_decisions(tap, std::vector<Decision>{S}), golden_hat());
}

TEST(GivenDecisions, MixedPair) {
  const Tap tap{4, {task(0, Rational(2), Rational(8)), task(1, Rational(1), Rational(1))}};
  EXPECT_EQ(opt_awake_given_decisions(tap, std::vector<Decision>{S, S}), Rational(2));
  EXPECT_EQ(opt_awake_given_decisions(tap, std::vector<Decision>{S, P}), Rational(2));
  EXPECT_EQ(opt_awake_given_decisions(tap, std::vector<Decision>{P, S}), Rational(9, 4));
  EXPECT_EQ(opt_awake_given_decisions(tap, std::vector<Decision>{P, P}), Rational(9, 4));
  EXPECT_EQ(opt_awake_given_decisions(tap, std::map<TaskId, Decision>{{0, P}, {1, S}}), Rational(9, 4));
}

TEST(Exhaustive, ReturnsLexicographicallyFirstMinimizer) {
  const Tap golden{4, {task(0, golden_hat(), Rational(4))}};
  const OptAwake g = opt_awake_exhaustive(golden);
  EXPECT_EQ(g.value, Rational(1));
  EXPECT_EQ(g.decisions, std::vector<Decision>{P});
  EXPECT_TRUE(g.exact);

  const Tap pair{4, {task(0, Rational(2), Rational(8)), task(1, Rational(1), Rational(1))}};
  const OptAwake o = opt_awake_exhaustive(pair);
  EXPECT_EQ(o.value, Rational(2));
  EXPECT_EQ(o.decisions, (std::vector<Decision>{S, S}));
}

TEST(Exhaustive, RefusesLargeInstances) {
  GenParams g;
  g.n = 6;
  EXPECT_THROW(opt_awake_exhaustive(gen_random(g), 5), InstanceTooLarge);
}

TEST(TrtLower, SingleAndMixed) {
  EXPECT_EQ(opt_trt_lower(Tap{16, {task(0, Rational(1), Rational(16))}}), Rational(1));
  const Tap tap{4, {task(0, Rational(2), Rational(2)), task(1, Rational(1), Rational(4))}};
  EXPECT_EQ(opt_trt_lower(tap), Rational(3, 2));
  Tap crowd{2, {}};
  for (TaskId k = 0; k < 4; ++k) crowd.tasks.push_back(task(k, Rational(1), Rational(1)));
  EXPECT_EQ(opt_trt_lower(crowd), Rational(5));
  EXPECT_EQ(srpt_trt({{Rational(0), Rational(2)}, {Rational(0), Rational(1)}}, Rational(1)), Rational(4));
  EXPECT_EQ(srpt_trt({{Rational(0), Rational(4)}, {Rational(1), Rational(1)}}, Rational(2)), Rational(5, 2) + Rational(1, 2));
}

TEST(Grid, AgreesWithExhaustiveOnAlignedInstances) {
  for (std::uint64_t seed = 1; seed <= 6; ++seed) {
    GenParams g;
    g.p = 2;
    g.n = 3;
    g.work_max = Rational(3);
    g.seed = seed;
    const Tap tap = gen_random(g);
    const OptAwake o = opt_awake_exhaustive(tap);
    const Rational grid = mwf_alignment_grid(tap, o.decisions);
    EXPECT_EQ(grid_opt(tap, Objective::Awake, grid, GridLimits{4, 200000, 4000000}), o.value) << "seed " << seed;
  }
}

TEST(Grid, AlignmentGridDividesEvents) {
  const Tap tap{4, {task(0, Rational(2), Rational(8)), task(1, Rational(1), Rational(1))}};
  const Rational g = mwf_alignment_grid(tap, {P, P});
  EXPECT_TRUE((Rational(9, 4) / g).is_integer());
  EXPECT_TRUE((Rational(2) / g).is_integer());
}
