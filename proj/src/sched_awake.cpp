#include <taplab/sched_awake.hpp>

#include <algorithm>

#include <json.hpp>

namespace taplab {

bool is_balanced(const BalanceState& state) {
  Rational longest;
  for (const Rational& r : state.serial_remaining) longest = max(longest, r);
  return longest <= state.total_remaining / Rational(state.p);
}

Decision bal_decide(BalanceState& state, const Task& task) {
  Rational longest = task.sigma;
  for (const Rational& r : state.serial_remaining) longest = max(longest, r);
  if (longest <= (state.total_remaining + task.sigma) / Rational(state.p)) {
    state.serial_remaining.push_back(task.sigma);
    state.total_remaining += task.sigma;
    return Decision::Serial;
  }
  state.total_remaining += task.pi;
  return Decision::Parallel;
}

BalanceState balance_state(const SimView& view) {
  BalanceState st;
  st.p = view.p();
  for (TaskId id : view.alive()) {
    const auto d = view.decision(id);
    if (!d) continue;
    const Rational& rem = view.remaining(id);
    if (*d == Decision::Serial) st.serial_remaining.push_back(rem);
    st.total_remaining += rem;
  }
  return st;
}

void MwfExecutor::on_instant_end(const SimView& view, Actions& out) {
  before_allocate(view, out);
  allocate_mwf(view, out);
}

void MwfExecutor::allocate_mwf(const SimView& view, Actions& out) {
  std::vector<WorkItem> serial, parallel;
  for (TaskId id : view.alive()) {
    const auto d = view.decision(id);
    if (d) {
      (*d == Decision::Serial ? serial : parallel).push_back({id, view.remaining(id)});
      continue;
    }
    auto it = starting_.find(id);
    if (it == starting_.end()) continue;
    if (it->second == Decision::Serial) {
      serial.push_back({id, view.sigma(id)});
    } else {
      parallel.push_back({id, view.task(id).pi});
    }
  }
  starting_.clear();
  MwfPlan plan = most_work_first(serial, parallel, view.budget(), view.speed());
  if (plan.crossing) out.set_timer(view.now() + *plan.crossing, next_tag_++);
  out.allocate(std::move(plan.alloc));
}

void MwfExecutor::start_now(Actions& out, TaskId id, Decision d) {
  out.start(id, d);
  starting_[id] = d;
}

// ---------------------------------------------------------------------------

void BalScheduler::on_arrival(const SimView& view, TaskId id, Actions& out) {
  BalanceState st = balance_state(view);
  Decision d = bal_decide(st, view.task(id));
  if (mutant_) d = d == Decision::Serial ? Decision::Parallel : Decision::Serial;
  out.start(id, d);
}

void BalScheduler::on_instant_end(const SimView& view, Actions& out) {
  ++checks_;
  if (!is_balanced(balance_state(view))) jagged_.push_back(view.now());
  MwfExecutor::on_instant_end(view, out);
}

std::string BalScheduler::annotations() const {
  nlohmann::ordered_json j;
  j["balance_checks"] = checks_;
  nlohmann::ordered_json times = nlohmann::ordered_json::array();
  for (const Rational& t : jagged_) times.push_back(t.str());
  j["jagged_times"] = std::move(times);
  return j.dump();
}

// ---------------------------------------------------------------------------

void UnkScheduler::on_arrival(const SimView& view, TaskId id, Actions& out) {
  out.set_timer(view.release_time(id) + view.sigma(id), static_cast<std::uint64_t>(id));
}

void UnkScheduler::on_instant_end(const SimView& view, Actions& out) {
  const Rational& now = view.now();
  const std::size_t p = static_cast<std::size_t>(view.p());
  std::vector<TaskId> serial;
  std::optional<TaskId> parallel;
  std::vector<TaskId> waiting;
  for (TaskId id : view.alive()) {
    const auto d = view.decision(id);
    if (!d) {
      waiting.push_back(id);
    } else if (*d == Decision::Serial) {
      serial.push_back(id);
    } else {
      parallel = id;
    }
  }

  auto start = [&](TaskId id, Decision d) {
    out.start(id, d);
    if (d == Decision::Serial) {
      serial.push_back(id);
    } else {
      parallel = id;
    }
  };
  if (serial.size() < p) {
    std::vector<TaskId> fresh;
    for (TaskId id : waiting) {
      if (now - view.release_time(id) > view.sigma(id)) {
        if (serial.size() < p) start(id, Decision::Serial);
      } else {
        fresh.push_back(id);
      }
    }
    if (!parallel && !fresh.empty()) {
      start(fresh.front(), Decision::Parallel);
      fresh.erase(fresh.begin());
    }
    // A task whose waiting time equals its serial work exactly becomes
    // serial-eligible immediately after; no later event would observe that, so
    // it is started now.
    for (TaskId id : fresh) {
      if (serial.size() >= p) break;
      if (now - view.release_time(id) == view.sigma(id)) start(id, Decision::Serial);
    }
  }

  Allocation alloc;
  for (TaskId id : serial) alloc.set(id, Rational(1));
  const Rational left = view.budget() - Rational(static_cast<long>(serial.size()));
  if (parallel && left.is_positive()) alloc.set(*parallel, left);
  out.allocate(std::move(alloc));
}

// ---------------------------------------------------------------------------

void MwfUniformScheduler::on_arrival(const SimView&, TaskId id, Actions& out) { out.start(id, decision_); }

void FixedDecisionScheduler::on_arrival(const SimView&, TaskId id, Actions& out) {
  auto it = decisions_.find(id);
  out.start(id, it == decisions_.end() ? Decision::Serial : it->second);
}

Rational golden_hat() { return Rational(987, 610); }

}  // namespace taplab
