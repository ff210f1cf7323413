#include <gtest/gtest.h>

#include <taplab/errors.hpp>
#include <taplab/generators.hpp>
#include <taplab/metrics.hpp>
#include <taplab/mwf.hpp>
#include <taplab/oracle.hpp>
#include <taplab/registry.hpp>
#include <taplab/sched_awake.hpp>

using namespace taplab;

namespace {

std::vector<Rational> ints(std::initializer_list<long> xs) {
  std::vector<Rational> out;
  for (long x : xs) out.emplace_back(x);
  return out;
}

Task task(TaskId id, long sigma, long pi, Rational arrival = Rational(0)) {
  return Task{id, Rational(sigma), Rational(pi), std::move(arrival), {}};
}

}  // namespace

TEST(Balance, DetectsJaggedStates) {
  EXPECT_TRUE(is_balanced(BalanceState{ints({1, 1, 1, 1}), Rational(4), 4}));
  EXPECT_FALSE(is_balanced(BalanceState{ints({2}), Rational(2), 4}));
  EXPECT_TRUE(is_balanced(BalanceState{{}, Rational(0), 4}));
}

TEST(Balance, DecisionKeepsBalance) {
  BalanceState empty{{}, Rational(0), 4};
  EXPECT_EQ(bal_decide(empty, task(0, 2, 8)), Decision::Parallel);
  EXPECT_EQ(empty.total_remaining, Rational(8));
  EXPECT_TRUE(empty.serial_remaining.empty());

  BalanceState full{ints({1, 1, 1, 1}), Rational(4), 4};
  EXPECT_EQ(bal_decide(full, task(1, 1, 4)), Decision::Serial);
  EXPECT_EQ(full.serial_remaining.size(), 5u);

  BalanceState two{{}, Rational(0), 2};
  EXPECT_EQ(bal_decide(two, task(2, 1, 1)), Decision::Parallel);
}

TEST(MostWorkFirst, ServesLargestSerialJobsFirst) {
  const auto plan = most_work_first({{0, Rational(3)}, {1, Rational(2)}, {2, Rational(1)}}, {}, Rational(2));
  EXPECT_EQ(plan.alloc.rate(0), Rational(1));
  EXPECT_EQ(plan.alloc.rate(1), Rational(1));
  EXPECT_EQ(plan.alloc.rate(2), Rational(0));
  ASSERT_TRUE(plan.crossing.has_value());
  EXPECT_EQ(*plan.crossing, Rational(1));
}

TEST(MostWorkFirst, LeftoverGoesToParallel) {
  const Allocation a = most_work_first_alloc({{0, Rational(1)}}, {{1, Rational(10)}, {2, Rational(5)}}, Rational(4));
  EXPECT_EQ(a.rate(0), Rational(1));
  EXPECT_EQ(a.rate(1), Rational(3));
  EXPECT_EQ(a.rate(2), Rational(0));
}

TEST(MostWorkFirst, TiedGroupSharesEqually) {
  const Allocation a = most_work_first_alloc({{0, Rational(2)}, {1, Rational(2)}, {2, Rational(2)}}, {}, Rational(2));
  EXPECT_EQ(a.rate(0), Rational(2, 3));
  EXPECT_EQ(a.total(), Rational(2));
}

TEST(Unk, WaitingExactlySerialWorkStillTakesTheFreeParallelSlot) {
  const Tap tap{2, {task(0, 1, 2), task(1, 1, 2)}};
  const RunResult r = run_scheduler(tap, RunConfig{"unk"});
  EXPECT_TRUE(r.violations.empty());
  EXPECT_EQ(r.trace.decisions.at(0).decision, Decision::Parallel);
  EXPECT_EQ(r.trace.decisions.at(1).decision, Decision::Parallel);
  EXPECT_EQ(r.trace.decisions.at(1).decision_time, Rational(1));
}

TEST(Unk, LongWaitersRunSerially) {
  const Tap tap{4, {task(0, 4, 16), task(1, 1, 4)}};
  const RunResult r = run_scheduler(tap, RunConfig{"unk"});
  EXPECT_TRUE(r.violations.empty());
  EXPECT_EQ(r.trace.decisions.at(1).decision, Decision::Serial);
  EXPECT_EQ(r.trace.decisions.at(1).decision_time, Rational(1));
}

TEST(Bal, StaysWithinThreeOfOptimumOnSmallInstances) {
  for (std::uint64_t seed = 1; seed <= 25; ++seed) {
    GenParams g;
    g.p = 4;
    g.n = 6;
    g.seed = seed;
    g.arrivals = ArrivalPattern::PoissonLike;
    const Tap tap = gen_random(g);
    BalScheduler bal;
    const Trace tr = simulate(tap, bal, {});
    EXPECT_TRUE(validate_trace(tr, tap, {}).empty());
    EXPECT_TRUE(bal.jagged_times().empty()) << "seed " << seed;
    const Rational opt = opt_awake_exhaustive(tap).value;
    EXPECT_LE(metrics_from_trace(tr).awake, Rational(3) * opt) << "seed " << seed;
  }
}

TEST(Mwf, UniformSchedulersAreOblivious) {
  MwfUniformScheduler s(Decision::Parallel);
  EXPECT_TRUE(s.parallel_work_oblivious());
  const Tap tap = gen_geometric(4);
  const Trace tr = simulate(tap, s, {});
  for (const auto& [id, rec] : tr.decisions) EXPECT_EQ(rec.decision, Decision::Parallel);
}

TEST(Golden, ConstantIsAConvergent) {
  EXPECT_EQ(golden_hat(), Rational(987, 610));
}

TEST(Golden, MatchesOptimumOnASingleParallelTask) {
  const Tap tap{4, {task(0, 4, 4)}};
  const RunResult r = run_scheduler(tap, RunConfig{"golden"});
  EXPECT_TRUE(r.violations.empty());
  EXPECT_EQ(r.metrics.awake, Rational(1));
}
