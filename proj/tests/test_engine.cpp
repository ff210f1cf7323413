#include <gtest/gtest.h>

#include <taplab/engine.hpp>
#include <taplab/errors.hpp>
#include <taplab/generators.hpp>
#include <taplab/metrics.hpp>
#include <taplab/sched_awake.hpp>

using namespace taplab;

namespace {

// Starts every task with a fixed decision and a fixed rate.
class FixedRate : public Scheduler {
 public:
  FixedRate(Decision d, Rational rate) : d_(d), rate_(std::move(rate)) {}
  std::string name() const override { return "fixed-rate"; }
  void on_arrival(const SimView&, TaskId id, Actions& out) override { out.start(id, d_); }
  void on_instant_end(const SimView& view, Actions& out) override {
    Allocation a;
    for (TaskId id : view.alive()) a.set(id, rate_);
    out.allocate(std::move(a));
  }

 private:
  Decision d_;
  Rational rate_;
};

class Canceller : public Scheduler {
 public:
  std::string name() const override { return "canceller"; }
  void on_arrival(const SimView&, TaskId id, Actions& out) override {
    out.start(id, Decision::Parallel);
    out.set_timer(Rational(1, 2), 1);
  }
  void on_timer(const SimView&, std::uint64_t, Actions& out) override {
    out.cancel(0);
    out.start(0, Decision::Serial);
  }
  void on_instant_end(const SimView& view, Actions& out) override {
    Allocation a;
    for (TaskId id : view.alive()) {
      if (view.started(id)) a.set(id, Rational(1));
    }
    out.allocate(std::move(a));
  }
};

class PiReader : public Scheduler {
 public:
  std::string name() const override { return "pi-reader"; }
  bool parallel_work_oblivious() const override { return true; }
  void on_arrival(const SimView& view, TaskId id, Actions&) override { (void)view.pi(id); }
};

const Tap kOne{2, {Task{0, Rational(1), Rational(2), Rational(0), {}}}};

Rational completion(const Trace& tr) { return tr.completions.at(0); }

}  // namespace

TEST(Simulate, SerialParallelAndSpeed) {
  FixedRate serial(Decision::Serial, Rational(1));
  EXPECT_EQ(completion(simulate(kOne, serial, {})), Rational(1));
  FixedRate parallel(Decision::Parallel, Rational(2));
  EXPECT_EQ(completion(simulate(kOne, parallel, {})), Rational(1));
  EngineConfig fast;
  fast.speed = Rational(2);
  FixedRate parallel2(Decision::Parallel, Rational(2));
  EXPECT_EQ(completion(simulate(kOne, parallel2, fast)), Rational(1, 2));
}

TEST(Simulate, RejectsInfeasibleAllocations) {
  FixedRate over(Decision::Parallel, Rational(3));
  EXPECT_THROW(simulate(kOne, over, {}), FeasibilityError);
  FixedRate serial_over(Decision::Serial, Rational(2));
  EXPECT_THROW(simulate(kOne, serial_over, {}), FeasibilityError);
}

TEST(Simulate, CancellationNeedsPermission) {
  Canceller c;
  EXPECT_THROW(simulate(kOne, c, {}), ContractError);
  EngineConfig ec;
  ec.allow_cancel = true;
  Canceller c2;
  const Trace tr = simulate(kOne, c2, ec);
  ASSERT_EQ(tr.cancellations.size(), 1u);
  EXPECT_TRUE(validate_trace(tr, kOne, ec).empty());
}

TEST(Simulate, HidesParallelWorkFromObliviousSchedulers) {
  PiReader r;
  EXPECT_THROW(simulate(kOne, r, {}), ObliviousnessViolation);
}

TEST(Simulate, StalledRunsAreReported) {
  FixedRate idle(Decision::Serial, Rational(0));
  EXPECT_THROW(simulate(kOne, idle, {}), StallError);
}

TEST(Simulate, DependenciesDelayRelease) {
  Tap chain{4, {}};
  for (TaskId i = 0; i < 3; ++i) {
    Task t{i, Rational(1), Rational(4), Rational(0), {}};
    if (i > 0) t.deps = {i - 1};
    chain.tasks.push_back(t);
  }
  MwfUniformScheduler s(Decision::Serial);
  const Trace tr = simulate(chain, s, {});
  EXPECT_EQ(tr.releases.at(2), Rational(2));
  EXPECT_EQ(metrics_from_trace(tr).awake, Rational(3));
}

TEST(Simulate, SpeedAugmentationMatchesScaledWorks) {
  GenParams g;
  g.p = 8;
  g.n = 7;
  g.seed = 11;
  g.arrivals = ArrivalPattern::Bursty;
  const Tap tap = gen_random(g);
  EngineConfig fast;
  fast.speed = Rational(3);
  BalScheduler a, b;
  const Trace scaled = simulate(scale_tap(tap, Rational(3)), a, fast);
  const Trace plain = simulate(tap, b, {});
  EXPECT_EQ(scaled.completions, plain.completions);
}

TEST(Validate, CatchesHandBuiltViolations) {
  FixedRate serial(Decision::Serial, Rational(1));
  Trace tr = simulate(kOne, serial, {});
  EXPECT_TRUE(validate_trace(tr).empty());

  Trace cap = tr;
  cap.slices[0].alloc.set(0, Rational(2));
  bool serial_cap = false;
  for (const auto& v : validate_trace(cap)) serial_cap |= v.find("serial cap") != std::string::npos;
  EXPECT_TRUE(serial_cap);

  Trace budget = tr;
  budget.tasks.push_back(Task{1, Rational(2), Rational(2), Rational(0), {}});
  budget.releases[1] = Rational(0);
  budget.completions[1] = Rational(1);
  budget.starts.push_back({1, Decision::Serial, Rational(0)});
  budget.decisions[1] = DecisionRecord{Decision::Serial, Rational(0), Rational(0)};
  budget.slices[0].alloc.set(1, Rational(2));
  bool over = false;
  for (const auto& v : validate_trace(budget)) over |= v.find("budget") != std::string::npos;
  EXPECT_TRUE(over);
}

TEST(Simulate, AdversaryInjectionsAreRecorded) {
  class OneShot : public Adversary {
   public:
    std::vector<Task> observe(const SimView& view) override {
      if (done_) return {};
      done_ = true;
      return {Task{7, Rational(1), Rational(1), view.now(), {}}};
    }
    bool done_ = false;
  } adv;
  MwfUniformScheduler s(Decision::Serial);
  const Trace tr = simulate(kOne, s, {}, &adv);
  EXPECT_EQ(tr.tasks.size(), 2u);
  EXPECT_TRUE(tr.complete());
  EXPECT_TRUE(validate_trace(tr).empty());
}
