#pragma once

#include <cstdint>
#include <optional>
#include <set>
#include <string>
#include <tuple>
#include <unordered_map>
#include <vector>

#include <taplab/rational.hpp>
#include <taplab/task.hpp>
#include <taplab/trace.hpp>

namespace taplab {

struct EngineConfig {
  Rational speed{1};
  std::optional<Rational> processor_budget;  // defaults to p
  bool allow_cancel = false;
  // Upper bound on processed instants; 0 picks a bound from the task and timer counts.
  std::uint64_t max_events = 0;

  Rational budget_for(int p) const { return processor_budget ? *processor_budget : Rational(p); }
};

class Simulation;

// Read-only window onto the simulation handed to schedulers and adversaries.
// In oblivious mode pi is hidden until a task has been started in parallel.
class SimView {
 public:
  SimView(const Simulation& sim, bool oblivious) : sim_(&sim), oblivious_(oblivious) {}

  const Rational& now() const;
  int p() const;
  const Rational& speed() const;
  const Rational& budget() const;
  bool allow_cancel() const;
  Rational awake_so_far() const;
  std::size_t task_count() const;

  // Released, unfinished tasks in release order.
  const std::vector<TaskId>& alive() const;

  bool known(TaskId id) const;
  bool released(TaskId id) const;
  bool done(TaskId id) const;
  std::optional<Decision> decision(TaskId id) const;
  bool started(TaskId id) const { return decision(id).has_value(); }

  const Rational& sigma(TaskId id) const;
  const Rational& pi(TaskId id) const;
  const Rational& arrival(TaskId id) const;
  const Rational& release_time(TaskId id) const;
  const Rational& remaining(TaskId id) const;
  Rational rate(TaskId id) const;
  const Allocation& allocation() const;
  const Task& task(TaskId id) const;
  const Trace& trace() const;

 private:
  std::size_t visible_index(TaskId id) const;

  const Simulation* sim_;
  bool oblivious_;
};

class Actions {
 public:
  void start(TaskId id, Decision d) { commands_.push_back({Kind::Start, id, d}); }
  void cancel(TaskId id) { commands_.push_back({Kind::Cancel, id, Decision::Serial}); }
  void set_timer(const Rational& at, std::uint64_t tag) { timers_.emplace_back(at, tag); }
  void allocate(Allocation a) { allocation_ = std::move(a); }

 private:
  friend class Simulation;
  enum class Kind { Start, Cancel };
  struct Command {
    Kind kind;
    TaskId id;
    Decision decision;
  };
  std::vector<Command> commands_;
  std::vector<std::pair<Rational, std::uint64_t>> timers_;
  std::optional<Allocation> allocation_;
};

// Callback contract. The allocation in force after an instant is the last one
// set by any callback during that instant; if none was set the previous one is
// kept minus finished or cancelled tasks.
class Scheduler {
 public:
  virtual ~Scheduler() = default;
  virtual std::string name() const = 0;
  virtual bool parallel_work_oblivious() const { return false; }
  virtual bool non_preemptive() const { return false; }

  virtual void on_arrival(const SimView& view, TaskId id, Actions& out);
  virtual void on_completion(const SimView& view, TaskId id, Actions& out);
  virtual void on_timer(const SimView& view, std::uint64_t tag, Actions& out);
  // Called once per processed instant after all of its events.
  virtual void on_instant_end(const SimView& view, Actions& out);

  // JSON annotations copied into Trace::aux when the run finishes.
  virtual std::string annotations() const { return {}; }
};

// Observes the run after every instant and may inject new tasks.
class Adversary {
 public:
  virtual ~Adversary() = default;
  virtual std::vector<Task> observe(const SimView& view) = 0;
};

class Simulation {
 public:
  Simulation(const Tap& tap, Scheduler& scheduler, EngineConfig config, Adversary* adversary = nullptr);

  // Adds a task arriving at or after the current time.
  void add_task(Task task);

  std::optional<Rational> next_event_time() const;
  // Processes the next instant; false when nothing is pending.
  bool step();
  // Processes every instant with time <= t.
  void run_until(const Rational& t);
  // Runs to quiescence; throws StallError if tasks remain unfinished.
  void run();

  const Rational& now() const { return now_; }
  const Allocation& allocation() const { return alloc_; }
  const Trace& trace() const { return trace_; }
  bool all_done() const { return done_count_ == tasks_.size(); }
  Trace finish();

 private:
  friend class SimView;

  struct TaskState {
    Task task;
    bool released = false;
    Rational release;
    std::optional<Decision> decision;
    Rational remaining;
    bool done = false;
    std::size_t unmet_deps = 0;
    std::vector<std::size_t> dependents;
  };

  std::size_t index_of(TaskId id) const;
  void register_task(Task task);
  void advance_to(const Rational& t);
  void apply(Actions& actions, bool& allocation_set);
  void finalize_allocation();
  void release_dependents(std::size_t k);
  void check_event_bound();
  void inject(std::vector<Task> tasks);

  Scheduler& scheduler_;
  EngineConfig config_;
  Adversary* adversary_;
  int p_;
  Rational speed_;
  Rational budget_;

  std::vector<TaskState> tasks_;
  std::unordered_map<TaskId, std::size_t> index_;
  std::vector<TaskId> alive_;
  std::set<std::pair<Rational, TaskId>> pending_releases_;
  std::set<std::pair<Rational, std::uint64_t>> timers_;
  std::size_t timers_registered_ = 0;
  std::size_t done_count_ = 0;

  Rational now_;
  Rational awake_;
  Allocation alloc_;
  Trace trace_;
};

Trace simulate(const Tap& tap, Scheduler& scheduler, const EngineConfig& config, Adversary* adversary = nullptr);

// Checks every trace invariant; returns human-readable violations (empty means valid).
std::vector<std::string> validate_trace(const Trace& trace, const Tap& tap, const EngineConfig& config);
std::vector<std::string> validate_trace(const Trace& trace);

}  // namespace taplab
