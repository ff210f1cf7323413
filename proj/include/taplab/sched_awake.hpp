#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include <taplab/engine.hpp>
#include <taplab/mwf.hpp>

namespace taplab {

struct BalanceState {
  std::vector<Rational> serial_remaining;
  Rational total_remaining;  // serial plus parallel
  int p = 2;
};

// True iff no serial job is longer than the average load W/p, i.e. a
// wrap-around placement keeps every processor busy until everything is done.
bool is_balanced(const BalanceState& state);

// Serial iff taking the task serially keeps the state balanced. Updates state.
Decision bal_decide(BalanceState& state, const Task& task);

// Remaining work of every started, unfinished task in the view.
BalanceState balance_state(const SimView& view);

// Base for schedulers that execute started tasks most-work-first. Subclasses
// only make decisions; allocation is recomputed at the end of every instant.
class MwfExecutor : public Scheduler {
 public:
  void on_instant_end(const SimView& view, Actions& out) override;

 protected:
  // Hook run before the allocation is computed.
  virtual void before_allocate(const SimView&, Actions&) {}
  void allocate_mwf(const SimView& view, Actions& out);
  // Start command that the allocation of the current instant already accounts for.
  void start_now(Actions& out, TaskId id, Decision d);

 private:
  std::uint64_t next_tag_ = 1;
  std::map<TaskId, Decision> starting_;
};

class BalScheduler : public MwfExecutor {
 public:
  // A mutant inverts the balance test; used to check that verification notices.
  explicit BalScheduler(bool mutant = false) : mutant_(mutant) {}

  std::string name() const override { return mutant_ ? "bal-mutant" : "bal"; }
  void on_arrival(const SimView& view, TaskId id, Actions& out) override;
  void on_instant_end(const SimView& view, Actions& out) override;
  std::string annotations() const override;

  std::size_t balance_checks() const { return checks_; }
  const std::vector<Rational>& jagged_times() const { return jagged_; }

 private:
  bool mutant_;
  std::size_t checks_ = 0;
  std::vector<Rational> jagged_;
};

// Parallel-work-oblivious scheduler: a task that has waited longer than its
// serial work runs serially; otherwise it may run in parallel, one at a time.
class UnkScheduler : public Scheduler {
 public:
  std::string name() const override { return "unk"; }
  bool parallel_work_oblivious() const override { return true; }
  void on_arrival(const SimView& view, TaskId id, Actions& out) override;
  void on_instant_end(const SimView& view, Actions& out) override;
};

// Decides every task the same way on arrival and runs most-work-first.
class MwfUniformScheduler : public MwfExecutor {
 public:
  explicit MwfUniformScheduler(Decision d) : decision_(d) {}
  std::string name() const override {
    return decision_ == Decision::Serial ? "mwf-all-serial" : "mwf-all-parallel";
  }
  bool parallel_work_oblivious() const override { return true; }
  void on_arrival(const SimView& view, TaskId id, Actions& out) override;

 private:
  Decision decision_;
};

// Applies a fixed decision per task on arrival (Serial for unlisted tasks).
class FixedDecisionScheduler : public MwfExecutor {
 public:
  explicit FixedDecisionScheduler(std::map<TaskId, Decision> decisions) : decisions_(std::move(decisions)) {}
  std::string name() const override { return "fixed"; }
  void on_arrival(const SimView& view, TaskId id, Actions& out) override;

 private:
  std::map<TaskId, Decision> decisions_;
};

// Experimental: keeps a serial pool run most-work-first and a parallel pool
// running one task at a time; on each arrival moves waiting parallel-pool tasks
// to the serial pool when sigma + awake-so-far is below golden * OPT(prefix).
class GoldenAlgScheduler : public MwfExecutor {
 public:
  static constexpr std::size_t kMaxOracleTasks = 15;

  std::string name() const override { return "golden"; }
  void on_arrival(const SimView& view, TaskId id, Actions& out) override;

 protected:
  void before_allocate(const SimView& view, Actions& out) override;

 private:
  std::vector<TaskId> parallel_pool_;  // waiting, in arrival order
  std::vector<Task> arrived_;
};

// Golden ratio convergent used wherever the constant is needed.
Rational golden_hat();

}  // namespace taplab
