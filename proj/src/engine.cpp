#include <taplab/engine.hpp>

#include <algorithm>

#include <taplab/errors.hpp>

namespace taplab {

void Scheduler::on_arrival(const SimView&, TaskId, Actions&) {}
void Scheduler::on_completion(const SimView&, TaskId, Actions&) {}
void Scheduler::on_timer(const SimView&, std::uint64_t, Actions&) {}
void Scheduler::on_instant_end(const SimView&, Actions&) {}

// ---------------------------------------------------------------------------
// SimView

const Rational& SimView::now() const { return sim_->now_; }
int SimView::p() const { return sim_->p_; }
const Rational& SimView::speed() const { return sim_->speed_; }
const Rational& SimView::budget() const { return sim_->budget_; }
bool SimView::allow_cancel() const { return sim_->config_.allow_cancel; }
Rational SimView::awake_so_far() const { return sim_->awake_; }
std::size_t SimView::task_count() const { return sim_->tasks_.size(); }
const std::vector<TaskId>& SimView::alive() const { return sim_->alive_; }
const Allocation& SimView::allocation() const { return sim_->alloc_; }
const Trace& SimView::trace() const { return sim_->trace_; }

bool SimView::known(TaskId id) const { return sim_->index_.count(id) > 0; }

bool SimView::released(TaskId id) const {
  return known(id) && sim_->tasks_[sim_->index_of(id)].released;
}

std::size_t SimView::visible_index(TaskId id) const {
  const std::size_t k = sim_->index_of(id);
  if (!sim_->tasks_[k].released) {
    throw VisibilityError("task " + std::to_string(id) + " is not available yet");
  }
  return k;
}

bool SimView::done(TaskId id) const { return sim_->tasks_[visible_index(id)].done; }

std::optional<Decision> SimView::decision(TaskId id) const { return sim_->tasks_[visible_index(id)].decision; }

const Rational& SimView::sigma(TaskId id) const { return sim_->tasks_[visible_index(id)].task.sigma; }

const Rational& SimView::pi(TaskId id) const {
  const auto& st = sim_->tasks_[visible_index(id)];
  if (oblivious_ && st.decision != Decision::Parallel) {
    throw ObliviousnessViolation("parallel work of task " + std::to_string(id) + " read by an oblivious scheduler");
  }
  return st.task.pi;
}

const Rational& SimView::arrival(TaskId id) const { return sim_->tasks_[visible_index(id)].task.arrival; }

const Rational& SimView::release_time(TaskId id) const { return sim_->tasks_[visible_index(id)].release; }

const Rational& SimView::remaining(TaskId id) const {
  const auto& st = sim_->tasks_[visible_index(id)];
  if (!st.decision) throw ContractError("remaining work of unstarted task " + std::to_string(id));
  return st.remaining;
}

Rational SimView::rate(TaskId id) const { return sim_->alloc_.rate(id); }

const Task& SimView::task(TaskId id) const {
  const auto& st = sim_->tasks_[visible_index(id)];
  if (oblivious_ && st.decision != Decision::Parallel) {
    throw ObliviousnessViolation("full record of task " + std::to_string(id) + " read by an oblivious scheduler");
  }
  return st.task;
}

// ---------------------------------------------------------------------------
// Simulation

Simulation::Simulation(const Tap& tap, Scheduler& scheduler, EngineConfig config, Adversary* adversary)
    : scheduler_(scheduler),
      config_(std::move(config)),
      adversary_(adversary),
      p_(tap.p),
      speed_(config_.speed),
      budget_(config_.budget_for(tap.p)) {
  if (speed_ < Rational(1)) throw InvalidArgument("speed must be at least 1");
  if (budget_ < Rational(tap.p)) throw InvalidArgument("processor budget must be at least p");
  trace_.p = p_;
  trace_.speed = speed_;
  trace_.budget = budget_;
  trace_.allow_cancel = config_.allow_cancel;
  for (const Task& t : tap.tasks) register_task(t);
}

std::size_t Simulation::index_of(TaskId id) const {
  auto it = index_.find(id);
  if (it == index_.end()) throw ContractError("unknown task id " + std::to_string(id));
  return it->second;
}

void Simulation::register_task(Task task) {
  if (index_.count(task.id)) throw InvalidInstance("duplicate task id " + std::to_string(task.id));
  if (task.arrival < now_) throw ContractError("task " + std::to_string(task.id) + " arrives in the past");
  const Task normalized = normalize_task(task, p_);
  if (!(normalized == task)) throw InvalidInstance("task " + std::to_string(task.id) + " is not normalized");
  const std::size_t k = tasks_.size();
  TaskState st;
  st.task = std::move(task);
  for (TaskId d : st.task.deps) {
    const std::size_t j = index_of(d);
    if (j == k) throw InvalidInstance("cyclic dependencies");
    if (!tasks_[j].done) {
      ++st.unmet_deps;
      tasks_[j].dependents.push_back(k);
    }
  }
  index_.emplace(st.task.id, k);
  trace_.tasks.push_back(st.task);
  if (st.unmet_deps == 0) pending_releases_.emplace(max(st.task.arrival, now_), st.task.id);
  tasks_.push_back(std::move(st));
}

void Simulation::add_task(Task task) { register_task(std::move(task)); }

std::optional<Rational> Simulation::next_event_time() const {
  std::optional<Rational> best;
  auto consider = [&best](const Rational& t) {
    if (!best || t < *best) best = t;
  };
  if (!pending_releases_.empty()) consider(pending_releases_.begin()->first);
  if (!timers_.empty()) consider(timers_.begin()->first);
  for (const auto& [id, rate] : alloc_) {
    const TaskState& st = tasks_[index_of(id)];
    consider(now_ + st.remaining / (speed_ * rate));
  }
  return best;
}

void Simulation::advance_to(const Rational& t) {
  if (t < now_) throw ContractError("time cannot move backwards");
  if (t == now_) return;
  const Rational dt = t - now_;
  trace_.slices.push_back(Slice{now_, t, alloc_});
  for (const auto& [id, rate] : alloc_) {
    TaskState& st = tasks_[index_of(id)];
    st.remaining -= speed_ * rate * dt;
    if (st.remaining.is_negative()) throw ContractError("engine overshot a completion");
  }
  if (!alive_.empty()) awake_ += dt;
  now_ = t;
}

void Simulation::check_event_bound() {
  const std::uint64_t bound =
      config_.max_events ? config_.max_events : 10000 + 200 * static_cast<std::uint64_t>(tasks_.size() + timers_registered_);
  if (trace_.events > bound) {
    throw RunawayError("event count " + std::to_string(trace_.events) + " exceeds bound " + std::to_string(bound));
  }
}

void Simulation::apply(Actions& actions, bool& allocation_set) {
  for (const auto& cmd : actions.commands_) {
    const std::size_t k = index_of(cmd.id);
    TaskState& st = tasks_[k];
    const std::string who = "task " + std::to_string(cmd.id);
    if (cmd.kind == Actions::Kind::Cancel) {
      if (!config_.allow_cancel) throw ContractError("cancellation of " + who + " with cancelling disabled");
      if (st.done || st.decision != Decision::Parallel) {
        throw ContractError("only running parallel tasks can be cancelled (" + who + ")");
      }
      st.decision.reset();
      st.remaining = Rational(0);
      alloc_.erase(cmd.id);
      trace_.decisions.erase(cmd.id);
      trace_.cancellations.emplace_back(cmd.id, now_);
    } else {
      if (!st.released) throw ContractError("start of unavailable " + who);
      if (st.done) throw ContractError("start of finished " + who);
      if (st.decision) throw ContractError("decision for " + who + " is irrevocable");
      st.decision = cmd.decision;
      st.remaining = cmd.decision == Decision::Serial ? st.task.sigma : st.task.pi;
      trace_.decisions[cmd.id] = DecisionRecord{cmd.decision, now_, std::nullopt};
      trace_.starts.push_back(StartEvent{cmd.id, cmd.decision, now_});
    }
  }
  actions.commands_.clear();
  for (auto& [at, tag] : actions.timers_) {
    if (at < now_) throw ContractError("timer registered in the past");
    if (timers_.emplace(at, tag).second) ++timers_registered_;
  }
  actions.timers_.clear();
  if (actions.allocation_) {
    allocation_set = true;
    alloc_ = std::move(*actions.allocation_);
    actions.allocation_.reset();
  }
}

void Simulation::finalize_allocation() {
  Rational total;
  for (const auto& [id, rate] : alloc_) {
    const std::string who = "task " + std::to_string(id);
    if (rate.is_negative()) throw FeasibilityError("negative rate for " + who);
    auto it = index_.find(id);
    if (it == index_.end()) throw FeasibilityError("rate for unknown " + who);
    const TaskState& st = tasks_[it->second];
    if (!st.released) throw FeasibilityError("rate for unavailable " + who);
    if (st.done) throw FeasibilityError("rate for finished " + who);
    if (!st.decision) throw FeasibilityError("rate for unstarted " + who);
    if (*st.decision == Decision::Serial && rate > Rational(1)) {
      throw FeasibilityError("serial cap exceeded by " + who + " (rate " + rate.str() + ")");
    }
    total += rate;
  }
  if (total > budget_) {
    throw FeasibilityError("processor budget exceeded: " + total.str() + " > " + budget_.str());
  }
  for (const auto& [id, rate] : alloc_) {
    DecisionRecord& rec = trace_.decisions[id];
    if (!rec.start_time) rec.start_time = now_;
  }
}

void Simulation::release_dependents(std::size_t k) {
  for (std::size_t m : tasks_[k].dependents) {
    TaskState& dep = tasks_[m];
    if (--dep.unmet_deps == 0) pending_releases_.emplace(max(dep.task.arrival, now_), dep.task.id);
  }
}

void Simulation::inject(std::vector<Task> tasks) {
  for (Task& t : tasks) register_task(std::move(t));
}

bool Simulation::step() {
  const auto next = next_event_time();
  if (!next) return false;
  advance_to(*next);
  ++trace_.events;
  check_event_bound();

  const SimView sched_view(*this, scheduler_.parallel_work_oblivious());
  Actions actions;
  bool allocation_set = false;

  // Completions first, all marked before any callback sees them.
  std::vector<TaskId> finished;
  for (const auto& [id, rate] : alloc_) {
    if (tasks_[index_of(id)].remaining.is_zero()) finished.push_back(id);
  }
  for (TaskId id : finished) {
    const std::size_t k = index_of(id);
    tasks_[k].done = true;
    ++done_count_;
    alloc_.erase(id);
    alive_.erase(std::find(alive_.begin(), alive_.end(), id));
    trace_.completions[id] = now_;
    release_dependents(k);
  }
  for (TaskId id : finished) {
    scheduler_.on_completion(sched_view, id, actions);
    apply(actions, allocation_set);
  }

  bool first_round = true;
  for (;;) {
    bool processed = false;
    while (!pending_releases_.empty() && pending_releases_.begin()->first == now_) {
      const TaskId id = pending_releases_.begin()->second;
      pending_releases_.erase(pending_releases_.begin());
      TaskState& st = tasks_[index_of(id)];
      st.released = true;
      st.release = now_;
      trace_.releases[id] = now_;
      alive_.push_back(id);
      scheduler_.on_arrival(sched_view, id, actions);
      apply(actions, allocation_set);
      processed = true;
    }
    std::vector<std::uint64_t> due;
    while (!timers_.empty() && timers_.begin()->first == now_) {
      due.push_back(timers_.begin()->second);
      timers_.erase(timers_.begin());
    }
    for (std::uint64_t tag : due) {
      scheduler_.on_timer(sched_view, tag, actions);
      apply(actions, allocation_set);
      processed = true;
    }
    if (processed || first_round) {
      scheduler_.on_instant_end(sched_view, actions);
      apply(actions, allocation_set);
      finalize_allocation();
    }
    first_round = false;
    if (adversary_) {
      const SimView full_view(*this, false);
      inject(adversary_->observe(full_view));
    }
    const bool more = (!pending_releases_.empty() && pending_releases_.begin()->first == now_) ||
                      (!timers_.empty() && timers_.begin()->first == now_);
    if (!more) break;
    ++trace_.events;
    check_event_bound();
  }
  return true;
}

void Simulation::run_until(const Rational& t) {
  for (;;) {
    const auto next = next_event_time();
    if (!next || *next > t) return;
    step();
  }
}

void Simulation::run() {
  while (step()) {
  }
  if (!all_done()) {
    throw StallError("scheduler " + scheduler_.name() + " left " + std::to_string(tasks_.size() - done_count_) +
                     " task(s) unfinished with no pending events");
  }
}

Trace Simulation::finish() {
  trace_.aux = scheduler_.annotations();
  return std::move(trace_);
}

Trace simulate(const Tap& tap, Scheduler& scheduler, const EngineConfig& config, Adversary* adversary) {
  Simulation sim(tap, scheduler, config, adversary);
  sim.run();
  return sim.finish();
}

}  // namespace taplab
