#pragma once

#include <map>
#include <memory>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include <taplab/engine.hpp>
#include <taplab/parallel_pool.hpp>

namespace taplab {

// budget/k for each of k jobs; with serial_cap each share is capped at 1 and
// the excess is left idle.
Allocation equi_alloc(const std::vector<TaskId>& jobs, const Rational& budget, bool serial_cap);

// Equal split of the whole budget among alive tasks, every task run with one
// fixed implementation (parallel by default). Never looks at the works.
class EquiScheduler : public Scheduler {
 public:
  explicit EquiScheduler(Decision d = Decision::Parallel) : decision_(d) {}
  std::string name() const override { return decision_ == Decision::Parallel ? "equi" : "equi-serial"; }
  bool parallel_work_oblivious() const override { return true; }
  void on_arrival(const SimView& view, TaskId id, Actions& out) override;
  void on_instant_end(const SimView& view, Actions& out) override;

 private:
  Decision decision_;
};

// Serial-only scheduler on 2p processors. Below p alive jobs every job gets a
// processor; from p jobs on, the jobs present before the switch keep dedicated
// processors and later ("scary") arrivals share the other p equally.
class SssScheduler : public Scheduler {
 public:
  std::string name() const override { return "sss"; }
  bool parallel_work_oblivious() const override { return true; }
  void on_arrival(const SimView& view, TaskId id, Actions& out) override;
  void on_instant_end(const SimView& view, Actions& out) override;
  std::string annotations() const override;

  struct Interval {
    Rational start;
    std::optional<Rational> end;
    std::vector<TaskId> non_scary;
  };
  const std::vector<Interval>& serious_intervals() const { return serious_; }

 private:
  bool serious_mode_ = false;
  std::set<TaskId> non_scary_;
  std::vector<Interval> serious_;
};

// Cancelling scheduler. Arrivals run in parallel on a pool whose split follows
// an equal-share simulation of relaxed jobs; a task still unfinished after
// sigma time in that pool is cancelled and restarted serially on a second pool.
class CancScheduler : public Scheduler {
 public:
  explicit CancScheduler(std::optional<Rational> pool_size = std::nullopt) : pool_size_(std::move(pool_size)) {}
  std::string name() const override { return "canc"; }
  void on_arrival(const SimView& view, TaskId id, Actions& out) override;
  void on_instant_end(const SimView& view, Actions& out) override;
  std::string annotations() const override;

  struct Cancellation {
    TaskId id;
    Rational time;
    Rational pool_age;
  };
  const std::vector<Cancellation>& cancellations() const { return cancelled_; }

 private:
  void ensure_model(const SimView& view);

  std::optional<Rational> pool_size_;
  std::unique_ptr<ParallelPoolModel> model_;
  std::vector<TaskId> serial_pool_;
  std::vector<Cancellation> cancelled_;
  std::vector<TaskId> arrived_now_;
};

// Cancelling scheduler for power-of-two instances that replays the cancelling
// scheduler above as a shadow and concentrates the shadow's parallel rate for
// each task type on a single running task of that type.
class BScheduler : public Scheduler {
 public:
  struct TypeKey {
    Rational ratio;  // pi / sigma
    Rational sigma;
    friend auto operator<=>(const TypeKey&, const TypeKey&) = default;
  };

  struct LogEntry {
    enum class Kind { ToSerial, ParallelComplete };
    Kind kind;
    TaskId id;
    Rational time;
  };

  struct Fake {
    std::uint64_t key;
    TypeKey type;
    Rational remaining;
  };

  // pool_size defaults to p; the second pool has the same size.
  explicit BScheduler(std::optional<Rational> pool_size = std::nullopt) : pool_size_(std::move(pool_size)) {}
  std::string name() const override { return "bsched"; }
  void on_arrival(const SimView& view, TaskId id, Actions& out) override;
  void on_completion(const SimView& view, TaskId id, Actions& out) override;
  void on_instant_end(const SimView& view, Actions& out) override;
  std::string annotations() const override;

  const std::vector<LogEntry>& log() const { return log_; }
  // Largest number of tasks of one type running in parallel at any instant.
  std::size_t max_parallel_per_type() const { return max_per_type_; }
  std::size_t fakes_created() const { return fakes_created_; }

 private:
  static TypeKey type_of(const Task& t) { return TypeKey{t.pi / t.sigma, t.sigma}; }
  void ensure_model(const SimView& view);

  std::optional<Rational> pool_size_;
  Rational pool_;
  std::unique_ptr<ParallelPoolModel> model_;
  std::map<TypeKey, std::vector<TaskId>> queues_;  // front runs in parallel
  std::set<TaskId> running_;                        // started parallel, alive
  std::map<TaskId, TypeKey> types_;
  std::vector<TaskId> serial_pool_;
  std::vector<Fake> fakes_;
  std::uint64_t next_fake_ = 0;
  std::size_t fakes_created_ = 0;
  Rational last_time_;
  Allocation last_fake_rates_;  // keyed by fake key
  std::vector<LogEntry> log_;
  std::size_t max_per_type_ = 0;
  std::uint64_t next_tag_ = 1;
};

// Non-cancelling scheduler. Simulates the type-concentrating scheduler on the
// instance with works scaled up, mirrors its allocations, and handles tasks it
// cannot follow through ballistic, semi-ballistic and emergency modes.
class CScheduler : public Scheduler {
 public:
  enum class Mode { Normal, Vested, SerialMirror, Ballistic, SemiBallistic, Done };

  struct Options {
    Rational inner_scale{3};
    // Reserve per parallelism class 2^j: 2^j processors by default; the
    // literal variant uses p / 2^j.
    bool literal_reserve = false;
  };

  struct Episode {
    TaskId id;
    Mode mode;
    bool hard;  // entered because the inner run finished it in parallel
    Rational enter;
    std::optional<Rational> exit;
  };

  struct Theft {
    TaskId thief;
    TaskId victim;
    Rational amount;  // processor-time
  };

  CScheduler() : CScheduler(Options{}) {}
  explicit CScheduler(Options options);
  ~CScheduler() override;

  std::string name() const override { return "csched"; }
  void on_arrival(const SimView& view, TaskId id, Actions& out) override;
  void on_completion(const SimView& view, TaskId id, Actions& out) override;
  void on_instant_end(const SimView& view, Actions& out) override;
  std::string annotations() const override;

  const std::vector<Episode>& episodes() const { return episodes_; }
  const std::vector<Theft>& thefts() const { return thefts_; }
  Rational stolen_from(TaskId victim) const;
  const Rational& max_reserve() const { return max_reserve_; }
  std::size_t inner_cancellations() const;

 private:
  struct Inner;

  Rational reserve_for(const Rational& ratio, int p) const;
  void enter_mode(TaskId id, Mode m, bool hard, const Rational& now);

  Options options_;
  std::unique_ptr<Inner> inner_;
  std::map<TaskId, Mode> modes_;
  std::map<TaskId, Task> tasks_;
  std::map<TaskId, std::size_t> open_episode_;
  std::vector<Episode> episodes_;
  std::vector<Theft> thefts_;
  std::vector<Theft> pending_thefts_;  // rates in force since last_time_
  Rational last_time_;
  std::vector<TaskId> new_arrivals_;
  std::size_t log_cursor_ = 0;
  Rational max_reserve_;
  std::uint64_t next_tag_ = 1;
};

const char* to_string(CScheduler::Mode m);

}  // namespace taplab
