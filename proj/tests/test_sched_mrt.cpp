#include <gtest/gtest.h>

#include <taplab/errors.hpp>
#include <taplab/generators.hpp>
#include <taplab/parallel_pool.hpp>
#include <taplab/registry.hpp>
#include <taplab/sched_mrt.hpp>

using namespace taplab;

namespace {

Task task(TaskId id, long sigma, long pi, Rational arrival = Rational(0)) {
  return Task{id, Rational(sigma), Rational(pi), std::move(arrival), {}};
}

Tap identical(int p, std::size_t n) {
  Tap tap{p, {}};
  for (std::size_t k = 0; k < n; ++k) tap.tasks.push_back(task(k, 1, p));
  return tap;
}

RunConfig cancelling(const std::string& name) {
  RunConfig c{name};
  c.allow_cancel = true;
  return c;
}

}  // namespace

TEST(Equi, SplitsBudgetEvenly) {
  const Allocation two = equi_alloc({0, 1}, Rational(4), false);
  EXPECT_EQ(two.rate(0), Rational(2));
  EXPECT_EQ(two.rate(1), Rational(2));
  const Allocation eight = equi_alloc({0, 1, 2, 3, 4, 5, 6, 7}, Rational(4), false);
  EXPECT_EQ(eight.rate(7), Rational(1, 2));
  const Allocation capped = equi_alloc({0, 1}, Rational(4), true);
  EXPECT_EQ(capped.rate(0), Rational(1));
  EXPECT_EQ(capped.total(), Rational(2));
}

TEST(Relaxed, RateIsFlatBelowThreshold) {
  const RelaxedJob job{0, Rational(2), Rational(4), Rational(0)};
  EXPECT_EQ(relaxed_rate(job, Rational(2)), Rational(1));
  EXPECT_EQ(relaxed_rate(job, Rational(4)), Rational(1));
  EXPECT_EQ(relaxed_rate(job, Rational(8)), Rational(2));
}

TEST(Pool, AgesOutUnfinishedMembers) {
  ParallelPoolModel pool(Rational(4), Rational(1));
  pool.add(task(0, 1, 4), Rational(0));
  pool.add(task(1, 1, 4), Rational(0));
  EXPECT_EQ(pool.share(), Rational(2));
  ASSERT_TRUE(pool.next_event().has_value());
  EXPECT_EQ(*pool.next_event(), Rational(1));
  pool.advance(Rational(1));
  const auto ev = pool.process();
  EXPECT_EQ(ev.aged_out.size(), 2u);
  EXPECT_TRUE(ev.shadow_done.empty());
}

TEST(Sss, UnitJobsEachGetAProcessor) {
  const RunResult r = run_scheduler(identical(4, 3), RunConfig{"sss"});
  EXPECT_TRUE(r.violations.empty());
  EXPECT_EQ(r.metrics.trt, Rational(3));
  EXPECT_EQ(r.budget_factor, Rational(2));
}

TEST(Sss, SwitchesToSeriousModeAtPJobs) {
  SssScheduler s;
  EngineConfig ec;
  ec.processor_budget = Rational(8);
  const Tap tap = identical(4, 6);
  const Trace tr = simulate(tap, s, ec);
  EXPECT_TRUE(validate_trace(tr, tap, ec).empty());
  EXPECT_FALSE(s.serious_intervals().empty());
}

TEST(Canc, LoneTaskFinishesInParallel) {
  const RunResult r = run_scheduler(identical(8, 1), cancelling("canc"));
  EXPECT_TRUE(r.violations.empty());
  EXPECT_TRUE(r.trace.cancellations.empty());
  EXPECT_EQ(r.trace.completions.at(0), Rational(1));
}

TEST(Canc, CrowdedPoolCancelsAtAgeSigma) {
  CancScheduler s(Rational(8));
  EngineConfig ec;
  ec.processor_budget = Rational(16);
  ec.allow_cancel = true;
  const Tap tap = identical(8, 9);
  const Trace tr = simulate(tap, s, ec);
  EXPECT_TRUE(validate_trace(tr, tap, ec).empty());
  ASSERT_EQ(s.cancellations().size(), 9u);
  for (const auto& c : s.cancellations()) {
    EXPECT_EQ(c.time, Rational(1));
    EXPECT_EQ(c.pool_age, Rational(1));
  }
}

TEST(Canc, RefusesToRunWithoutCancelling) {
  EXPECT_THROW(run_scheduler(identical(4, 2), RunConfig{"canc"}), FeasibilityError);
}

TEST(BSched, NeverRunsTwoTasksOfOneTypeInParallel) {
  for (std::uint64_t seed = 1; seed <= 10; ++seed) {
    GenParams g;
    g.p = 8;
    g.n = 10;
    g.seed = seed;
    g.ratio = RatioDistribution::PowersOfTwo;
    g.arrivals = ArrivalPattern::Bursty;
    const Tap tap = round_pow2(gen_random(g));
    BScheduler s;
    EngineConfig ec;
    ec.processor_budget = Rational(16);
    ec.allow_cancel = true;
    const Trace tr = simulate(tap, s, ec);
    EXPECT_TRUE(validate_trace(tr, tap, ec).empty());
    EXPECT_LE(s.max_parallel_per_type(), 1u) << "seed " << seed;
  }
}

TEST(BSched, RegistryRoundsInstancesFirst) {
  const Tap tap{4, {task(0, 3, 5)}};
  const RunResult r = run_scheduler(tap, cancelling("bsched"));
  EXPECT_TRUE(r.violations.empty());
  EXPECT_TRUE(is_pow2_rounded(r.instance));
  EXPECT_EQ(r.augmentation, Rational(4));
}

TEST(CSched, NeverCancelsAndBoundsReserve) {
  for (std::uint64_t seed = 1; seed <= 10; ++seed) {
    GenParams g;
    g.p = 8;
    g.n = 8;
    g.seed = seed;
    g.ratio = RatioDistribution::PowersOfTwo;
    g.arrivals = ArrivalPattern::PoissonLike;
    const RunResult r = run_scheduler(gen_random(g), RunConfig{"csched"});
    EXPECT_TRUE(r.violations.empty()) << "seed " << seed;
    EXPECT_TRUE(r.trace.cancellations.empty());
    EXPECT_EQ(r.augmentation, Rational(8));
  }
}

TEST(CSched, CraftedInstanceEntersBallisticMode) {
  const Tap tap = gen_emergency(16, 2, 3, 4);
  CScheduler s;
  EngineConfig ec;
  ec.processor_budget = Rational(64);
  const Trace tr = simulate(tap, s, ec);
  EXPECT_TRUE(validate_trace(tr, tap, ec).empty());
  EXPECT_LE(s.max_reserve(), Rational(32));
  bool ballistic = false;
  for (const auto& e : s.episodes()) ballistic |= e.mode == CScheduler::Mode::Ballistic;
  EXPECT_TRUE(ballistic);
}
