#include <taplab/dtap.hpp>

#include <algorithm>
#include <map>

#include <taplab/errors.hpp>
#include <taplab/metrics.hpp>

namespace taplab {

TurtleClass turtle_classify(const Task& task, int p) {
  return task.pi * task.pi < task.sigma * task.sigma * Rational(p) ? TurtleClass::FairlyParallel
                                                                     : TurtleClass::NotVeryParallel;
}

void ParallelFirstScheduler::on_arrival(const SimView& view, TaskId id, Actions& out) {
  out.start(id, decide(view, id));
}

void ParallelFirstScheduler::on_instant_end(const SimView& view, Actions& out) {
  std::optional<TaskId> parallel;
  std::vector<WorkItem> serial;
  for (TaskId id : view.alive()) {
    const auto d = view.decision(id);
    if (d == Decision::Parallel) {
      if (!parallel || id < *parallel) parallel = id;
    } else if (d == Decision::Serial) {
      serial.push_back({id, view.remaining(id)});
    }
  }
  if (parallel) {
    Allocation a;
    a.set(*parallel, view.budget());
    out.allocate(std::move(a));
    return;
  }
  MwfPlan plan = most_work_first(serial, {}, view.budget(), view.speed());
  if (plan.crossing) out.set_timer(view.now() + *plan.crossing, next_tag_++);
  out.allocate(std::move(plan.alloc));
}

Decision TurtleScheduler::decide(const SimView& view, TaskId id) {
  return turtle_classify(view.task(id), view.p()) == TurtleClass::FairlyParallel ? Decision::Parallel
                                                                                  : Decision::Serial;
}

bool turtle_parallel_work_holds(const Tap& tap) {
  Rational fp_pi, sigma;
  for (const Task& t : tap.tasks) {
    sigma += t.sigma;
    if (turtle_classify(t, tap.p) == TurtleClass::FairlyParallel) fp_pi += t.pi;
  }
  const Rational p(tap.p);
  return fp_pi * fp_pi * p <= sigma * sigma * p * p;
}

LevelStructure level_structure(const Tap& tap) {
  const std::int64_t side = isqrt_floor(tap.p);
  if (!is_perfect_square(tap.p)) throw ContractError("level instances need a perfect-square processor count");
  const Rational root(side);
  if (tap.tasks.size() != static_cast<std::size_t>(side * side)) throw ContractError("level instance has the wrong size");
  std::map<TaskId, std::size_t> level;
  std::map<TaskId, std::size_t> dependents;
  LevelStructure ls;
  ls.levels.resize(static_cast<std::size_t>(side));
  for (std::size_t k : topological_order(tap)) {
    const Task& t = tap.tasks[k];
    if (t.sigma != Rational(1) || t.pi != root || !t.arrival.is_zero()) {
      throw ContractError("task " + std::to_string(t.id) + " does not have the level shape");
    }
    std::size_t lv = 0;
    if (t.deps.size() > 1) throw ContractError("level tasks have at most one dependency");
    if (!t.deps.empty()) {
      lv = level.at(t.deps.front()) + 1;
      ++dependents[t.deps.front()];
    }
    if (lv >= ls.levels.size()) throw ContractError("level instance is too deep");
    level[t.id] = lv;
    ls.levels[lv].push_back(t.id);
  }
  for (std::size_t lv = 0; lv < ls.levels.size(); ++lv) {
    auto& ids = ls.levels[lv];
    std::sort(ids.begin(), ids.end());
    if (ids.size() != static_cast<std::size_t>(side)) throw ContractError("level " + std::to_string(lv) + " has the wrong width");
    if (lv + 1 == ls.levels.size()) {
      ls.spawners.push_back(ids.front());
      continue;
    }
    std::vector<TaskId> parents;
    for (TaskId id : ids) {
      if (dependents.count(id)) parents.push_back(id);
    }
    if (parents.size() != 1 || dependents.at(parents.front()) != static_cast<std::size_t>(side)) {
      throw ContractError("level " + std::to_string(lv) + " does not have exactly one spawner");
    }
    ls.spawners.push_back(parents.front());
  }
  return ls;
}

namespace {

class SpawnerWitness : public ParallelFirstScheduler {
 public:
  explicit SpawnerWitness(std::set<TaskId> spawners) : spawners_(std::move(spawners)) {}
  std::string name() const override { return "level-witness"; }

 protected:
  Decision decide(const SimView&, TaskId id) override {
    return spawners_.count(id) ? Decision::Parallel : Decision::Serial;
  }

 private:
  std::set<TaskId> spawners_;
};

}  // namespace

WitnessSchedule dtap_opt_upper_levels(const Tap& tap) {
  const LevelStructure ls = level_structure(tap);
  SpawnerWitness witness(std::set<TaskId>(ls.spawners.begin(), ls.spawners.end()));
  WitnessSchedule out;
  out.trace = simulate(tap, witness, EngineConfig{});
  out.awake = metrics_from_trace(out.trace).awake;
  return out;
}

}  // namespace taplab
