#include <gtest/gtest.h>

#include <taplab/errors.hpp>
#include <taplab/metrics.hpp>
#include <taplab/rational.hpp>
#include <taplab/tap_json.hpp>
#include <taplab/task.hpp>

using namespace taplab;

namespace {

Task task(TaskId id, Rational sigma, Rational pi, Rational arrival = Rational(0)) {
  return Task{id, std::move(sigma), std::move(pi), std::move(arrival), {}};
}

}  // namespace

TEST(Rational, ArithmeticIsExactAndCanonical) {
  const Rational a(1, 3), b(1, 6);
  EXPECT_EQ((a + b).str(), "1/2");
  EXPECT_EQ((a - b).str(), "1/6");
  EXPECT_EQ((a * b).str(), "1/18");
  EXPECT_EQ((a / b).str(), "2");
  EXPECT_EQ(Rational(6, 4).str(), "3/2");
  EXPECT_EQ(Rational::parse("10/4"), Rational(5, 2));
  EXPECT_EQ(Rational::parse("-3"), Rational(-3));
  EXPECT_THROW(Rational::parse("1/0"), std::invalid_argument);
  EXPECT_THROW(Rational::parse("abc"), std::invalid_argument);
}

TEST(Rational, PowersOfTwo) {
  EXPECT_EQ(pow2(-3), Rational(1, 8));
  EXPECT_TRUE(is_pow2(Rational(1, 4)));
  EXPECT_FALSE(is_pow2(Rational(3, 4)));
  EXPECT_EQ(log2_exact(Rational(1, 2)), -1);
  EXPECT_EQ(ceil_pow2(Rational(3)), Rational(4));
  EXPECT_EQ(ceil_pow2(Rational(4)), Rational(4));
  EXPECT_EQ(ceil_pow2(Rational(3, 8)), Rational(1, 2));
  EXPECT_EQ(floor_pow2(Rational(7)), Rational(4));
  EXPECT_EQ(isqrt_floor(17), 4);
  EXPECT_EQ(isqrt_ceil(17), 5);
  EXPECT_TRUE(is_perfect_square(256));
}

TEST(Normalize, ClampsBothImplementations) {
  EXPECT_EQ(normalize_task(task(0, Rational(2), Rational(1)), 4), task(0, Rational(1), Rational(1)));
  EXPECT_EQ(normalize_task(task(0, Rational(1), Rational(8)), 4), task(0, Rational(1), Rational(4)));
  EXPECT_EQ(normalize_task(task(0, Rational(1), Rational(2)), 4), task(0, Rational(1), Rational(2)));
  EXPECT_THROW(normalize_task(task(0, Rational(0), Rational(2)), 4), InvalidInstance);
}

TEST(Scale, MultipliesWorks) {
  const Tap tap{4, {task(0, Rational(1), Rational(2))}};
  EXPECT_EQ(scale_tap(tap, Rational(1)), tap);
  const Tap scaled = scale_tap(tap, Rational(3));
  EXPECT_EQ(scaled.tasks[0].sigma, Rational(3));
  EXPECT_EQ(scaled.tasks[0].pi, Rational(6));
  EXPECT_THROW(scale_tap(tap, Rational(1, 2)), InvalidArgument);
}

TEST(RoundPow2, RoundsUpAndKeepsRatioAPowerOfTwo) {
  const Tap tap{8, {task(0, Rational(3), Rational(5)), task(1, Rational(4), Rational(4))}};
  const Tap r = round_pow2(tap);
  EXPECT_EQ(r.tasks[0].sigma, Rational(4));
  EXPECT_EQ(r.tasks[0].pi, Rational(8));
  EXPECT_EQ(r.tasks[1].sigma, Rational(4));
  EXPECT_TRUE(is_pow2_rounded(r));
  EXPECT_FALSE(is_pow2_rounded(tap));
}

TEST(TaskType, ExponentSignature) {
  EXPECT_EQ(task_type(task(0, Rational(2), Rational(16))), (TaskType{3, 1}));
  EXPECT_EQ(task_type(task(0, Rational(1), Rational(1))), (TaskType{0, 0}));
  EXPECT_EQ(task_type(task(0, Rational(1, 2), Rational(4))), (TaskType{3, -1}));
  EXPECT_THROW(task_type(task(0, Rational(3), Rational(6))), ContractError);
}

TEST(Validate, RejectsBrokenInstances) {
  Tap dup{4, {task(0, Rational(1), Rational(1)), task(0, Rational(1), Rational(1))}};
  EXPECT_THROW(validate_tap(dup), InvalidInstance);
  Tap cyclic{4, {task(0, Rational(1), Rational(1)), task(1, Rational(1), Rational(1))}};
  cyclic.tasks[0].deps = {1};
  cyclic.tasks[1].deps = {0};
  try {
    validate_tap(cyclic);
    FAIL() << "cycle accepted";
  } catch (const InvalidInstance& e) {
    EXPECT_NE(std::string(e.what()).find("cyclic dependencies"), std::string::npos);
  }
}

TEST(Json, RoundTripIsCanonical) {
  Tap tap{4, {task(0, Rational(1, 3), Rational(2, 3)), task(1, Rational(2), Rational(8), Rational(1, 2))}};
  tap.tasks[1].deps = {0};
  const std::string text = tap_to_json(tap);
  EXPECT_EQ(tap_from_json(text), tap);
  EXPECT_EQ(tap_to_json(tap_from_json(text)), text);
  EXPECT_EQ(instance_hash(tap), instance_hash(tap_from_json(text)));
  EXPECT_THROW(tap_from_json("{\"version\":1,\"p\":4}"), InvalidInstance);
  EXPECT_THROW(tap_from_json("not json"), InvalidInstance);
}

TEST(Metrics, UnionMeasure) {
  EXPECT_EQ(union_measure({{Rational(0), Rational(1)}, {Rational(2), Rational(3)}}), Rational(2));
  EXPECT_EQ(union_measure({{Rational(0), Rational(2)}, {Rational(1), Rational(3)}}), Rational(3));
  EXPECT_EQ(union_measure({}), Rational(0));
}

TEST(Metrics, SingleTask) {
  Trace tr;
  tr.p = 2;
  tr.budget = Rational(2);
  tr.tasks = {task(0, Rational(1), Rational(2))};
  tr.releases[0] = Rational(0);
  tr.completions[0] = Rational(1);
  const Metrics m = metrics_from_trace(tr);
  EXPECT_EQ(m.awake, Rational(1));
  EXPECT_EQ(m.trt, Rational(1));
  EXPECT_EQ(m.mrt, Rational(1));
  tr.completions.clear();
  EXPECT_THROW(metrics_from_trace(tr), IncompleteTrace);
}
