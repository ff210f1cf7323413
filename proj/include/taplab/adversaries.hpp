#pragma once

#include <optional>
#include <string>
#include <vector>

#include <taplab/engine.hpp>

namespace taplab {

// Starts with one task (sigma = golden, pi = p). If the scheduler starts it in
// parallel at t0 < 1/golden, p-1 unparallelizable tasks with serial work
// golden - t0 arrive just after t0.
class GoldenAdversary : public Adversary {
 public:
  explicit GoldenAdversary(int p) : p_(p) {}
  Tap initial() const;
  std::vector<Task> observe(const SimView& view) override;

  bool injected() const { return t0_.has_value(); }
  const std::optional<Rational>& t0() const { return t0_; }

 private:
  int p_;
  std::optional<Rational> t0_;
};

// Runs a probe instance and, the first time every busy task has at least one
// unit of work left while the number of busy processors is the largest seen,
// injects ceil(R*h) tiny tasks, h being the response-time lower bound of the probe.
class NonpreemptiveAdversary : public Adversary {
 public:
  NonpreemptiveAdversary(long r, Tap probe);
  const Tap& initial() const { return probe_; }
  std::vector<Task> observe(const SimView& view) override;

  bool triggered() const { return trigger_time_.has_value(); }
  const std::optional<Rational>& trigger_time() const { return trigger_time_; }
  const Rational& probe_bound() const { return h_; }
  static Rational tiny_work() { return Rational(1, 1000); }

 private:
  long r_;
  Tap probe_;
  Rational h_;
  Rational max_busy_;
  std::optional<Rational> trigger_time_;
};

// First-come-first-served, every task in parallel on the whole budget, never
// preempted.
class RigidScheduler : public Scheduler {
 public:
  std::string name() const override { return "rigid"; }
  bool non_preemptive() const override { return true; }
  void on_arrival(const SimView& view, TaskId id, Actions& out) override;
  void on_instant_end(const SimView& view, Actions& out) override;

 private:
  std::optional<TaskId> running_;
};

// Single probe task of serial work 1 and parallel work p.
Tap nonpreemptive_probe(int p);

}  // namespace taplab
