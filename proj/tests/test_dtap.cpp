#include <gtest/gtest.h>

#include <cmath>

#include <taplab/dtap.hpp>
#include <taplab/errors.hpp>
#include <taplab/generators.hpp>
#include <taplab/metrics.hpp>
#include <taplab/registry.hpp>

using namespace taplab;

namespace {

Task task(TaskId id, long sigma, long pi, std::vector<TaskId> deps = {}) {
  return Task{id, Rational(sigma), Rational(pi), Rational(0), std::move(deps)};
}

}  // namespace

TEST(Turtle, ClassifiesBySquareRootThreshold) {
  EXPECT_EQ(turtle_classify(task(0, 10, 50), 100), TurtleClass::FairlyParallel);
  EXPECT_EQ(turtle_classify(task(0, 10, 200), 100), TurtleClass::NotVeryParallel);
  EXPECT_EQ(turtle_classify(task(0, 10, 100), 100), TurtleClass::NotVeryParallel);
}

TEST(Turtle, SerialChainTakesItsLength) {
  const Tap chain{4, {task(0, 1, 4), task(1, 1, 4, {0}), task(2, 1, 4, {1})}};
  const RunResult r = run_scheduler(chain, RunConfig{"turtle"});
  EXPECT_TRUE(r.violations.empty());
  EXPECT_EQ(r.metrics.awake, Rational(3));
  for (const auto& [id, rec] : r.trace.decisions) EXPECT_EQ(rec.decision, Decision::Serial);
}

TEST(Turtle, FairlyParallelTasksRunOnEverything) {
  const Tap tap{16, {task(0, 8, 16), task(1, 1, 1, {0})}};
  const RunResult r = run_scheduler(tap, RunConfig{"turtle"});
  EXPECT_TRUE(r.violations.empty());
  EXPECT_EQ(r.trace.decisions.at(0).decision, Decision::Parallel);
  EXPECT_EQ(r.trace.completions.at(0), Rational(1));
  EXPECT_EQ(r.metrics.awake, Rational(17, 16));
}

TEST(Turtle, ParallelWorkCondition) {
  EXPECT_TRUE(turtle_parallel_work_holds(Tap{16, {task(0, 8, 16)}}));
  EXPECT_TRUE(turtle_parallel_work_holds(Tap{16, {task(0, 1, 16)}}));
}

TEST(Levels, StructureIsRecovered) {
  const Tap tap = gen_dtap_levels(16, 3);
  const LevelStructure ls = level_structure(tap);
  EXPECT_EQ(ls.levels.size(), 4u);
  EXPECT_EQ(ls.spawners.size(), 4u);
  for (const auto& level : ls.levels) EXPECT_EQ(level.size(), 4u);
  EXPECT_THROW(level_structure(Tap{4, {task(0, 1, 1), task(1, 1, 1)}}), ContractError);
}

TEST(Levels, WitnessIsShortAndTurtleIsSlow) {
  for (int p : {4, 16}) {
    const Tap tap = gen_dtap_levels(p, 7);
    const WitnessSchedule w = dtap_opt_upper_levels(tap);
    EXPECT_TRUE(validate_trace(w.trace).empty());
    EXPECT_LE(w.awake, Rational(2));
    if (p == 16) {
      const RunResult r = run_scheduler(tap, RunConfig{"turtle"});
      const double ratio = (r.metrics.awake / w.awake).to_double();
      EXPECT_GE(ratio, std::sqrt(double(p)) / 4);
      EXPECT_LE(ratio, 3 * std::sqrt(double(p)));
    }
  }
}

TEST(Dependencies, ReleaseWaitsForAllParents) {
  const Tap tap{4, {task(0, 2, 8), task(1, 1, 4), task(2, 1, 4, {0, 1})}};
  const RunResult r = run_scheduler(tap, RunConfig{"turtle"});
  EXPECT_TRUE(r.violations.empty());
  EXPECT_EQ(r.trace.releases.at(2), std::max(r.trace.completions.at(0), r.trace.completions.at(1)));
}
