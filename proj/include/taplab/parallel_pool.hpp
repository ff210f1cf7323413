#pragma once

#include <map>
#include <optional>
#include <vector>

#include <taplab/rational.hpp>
#include <taplab/task.hpp>

namespace taplab {

// Surrogate job with work 2*sigma that gains nothing from fewer than pi/sigma
// processors and scales linearly beyond that.
struct RelaxedJob {
  TaskId task_id = 0;
  Rational total_work;  // 2 * sigma
  Rational threshold;   // pi / sigma
  Rational progress;
};

// Progress rate of a relaxed job on x processors (before speed scaling).
Rational relaxed_rate(const RelaxedJob& job, const Rational& x);

// Equal split of a processor pool over relaxed jobs, tracking for every member
// the parallel work its real task would accumulate on the same processors.
class ParallelPoolModel {
 public:
  struct Member {
    Task task;
    Rational entry;
    RelaxedJob relaxed;
    Rational shadow_work;  // parallel work done on the real task
    bool shadow_alive = true;
  };

  struct Events {
    std::vector<TaskId> shadow_done;  // real task reached pi
    std::vector<TaskId> aged_out;     // reached age sigma with the real task unfinished
  };

  ParallelPoolModel(Rational pool_size, Rational speed);

  void add(const Task& task, const Rational& now);
  // Moves time forward at the current rates.
  void advance(const Rational& now);
  // Detects completions and age-outs at the current time. Throws
  // InvariantViolation if a relaxed job finishes before its real task.
  Events process();

  std::optional<Rational> next_event() const;
  // Processor rate of a member in the current split (0 if absent).
  Rational share() const;
  const std::map<TaskId, Member>& members() const { return members_; }
  bool contains(TaskId id) const { return members_.count(id) > 0; }
  const Rational& now() const { return now_; }

 private:
  Rational pool_size_;
  Rational speed_;
  Rational now_;
  std::map<TaskId, Member> members_;
};

}  // namespace taplab
