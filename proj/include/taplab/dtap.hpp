#pragma once

#include <functional>
#include <set>
#include <string>

#include <taplab/engine.hpp>
#include <taplab/mwf.hpp>

namespace taplab {

enum class TurtleClass { FairlyParallel, NotVeryParallel };

// Fairly parallel iff pi/p < sigma/sqrt(p), evaluated as pi^2 < sigma^2 * p.
TurtleClass turtle_classify(const Task& task, int p);

// Every task is started when it becomes available. While a started parallel
// task is alive the lowest-id one gets the whole budget; otherwise serial tasks
// run most-work-first.
class ParallelFirstScheduler : public Scheduler {
 public:
  void on_arrival(const SimView& view, TaskId id, Actions& out) override;
  void on_instant_end(const SimView& view, Actions& out) override;

 protected:
  virtual Decision decide(const SimView& view, TaskId id) = 0;

 private:
  std::uint64_t next_tag_ = 1;
};

class TurtleScheduler : public ParallelFirstScheduler {
 public:
  std::string name() const override { return "turtle"; }

 protected:
  Decision decide(const SimView& view, TaskId id) override;
};

// True iff the parallel work of the fairly-parallel tasks, spread over p
// processors, is at most the total serial work divided by sqrt(p).
bool turtle_parallel_work_holds(const Tap& tap);

struct LevelStructure {
  std::vector<std::vector<TaskId>> levels;
  std::vector<TaskId> spawners;  // one per level; the last level uses its lowest id
};

// Recognizes a level instance; throws ContractError otherwise.
LevelStructure level_structure(const Tap& tap);

struct WitnessSchedule {
  Trace trace;
  Rational awake;
};

// Runs every spawner in parallel on all processors, then the rest serially.
WitnessSchedule dtap_opt_upper_levels(const Tap& tap);

}  // namespace taplab
