#include <taplab/sched_mrt.hpp>

#include <algorithm>

#include <json.hpp>

#include <taplab/errors.hpp>

namespace taplab {

const char* to_string(CScheduler::Mode m) {
  switch (m) {
    case CScheduler::Mode::Normal: return "normal";
    case CScheduler::Mode::Vested: return "vested";
    case CScheduler::Mode::SerialMirror: return "serial_mirror";
    case CScheduler::Mode::Ballistic: return "ballistic";
    case CScheduler::Mode::SemiBallistic: return "semi_ballistic";
    case CScheduler::Mode::Done: return "done";
  }
  return "?";
}

struct CScheduler::Inner {
  Inner(int p, const Rational& speed)
      : sched(Rational(p) / Rational(2)), sim(Tap{p, {}}, sched, config(p, speed)) {}

  static EngineConfig config(int p, const Rational& speed) {
    EngineConfig c;
    c.speed = speed;
    c.processor_budget = Rational(p);
    c.allow_cancel = true;
    return c;
  }

  BScheduler sched;
  Simulation sim;
};

CScheduler::CScheduler(Options options) : options_(std::move(options)) {
  if (options_.inner_scale < Rational(1)) throw InvalidArgument("inner scale must be at least 1");
}

CScheduler::~CScheduler() = default;

Rational CScheduler::reserve_for(const Rational& ratio, int p) const {
  return options_.literal_reserve ? Rational(p) / ratio : ratio;
}

Rational CScheduler::stolen_from(TaskId victim) const {
  Rational total;
  for (const Theft& t : thefts_) {
    if (t.victim == victim) total += t.amount;
  }
  return total;
}

std::size_t CScheduler::inner_cancellations() const {
  return inner_ ? inner_->sim.trace().cancellations.size() : 0;
}

void CScheduler::enter_mode(TaskId id, Mode m, bool hard, const Rational& now) {
  modes_[id] = m;
  if (m == Mode::Ballistic || m == Mode::SemiBallistic) {
    open_episode_[id] = episodes_.size();
    episodes_.push_back(Episode{id, m, hard, now, std::nullopt});
  }
}

void CScheduler::on_arrival(const SimView& view, TaskId id, Actions&) {
  if (view.allow_cancel()) throw ContractError("csched must run with cancelling disabled");
  const Task& t = view.task(id);
  task_type(t);  // rejects instances that are not power-of-two rounded
  tasks_.emplace(id, t);
  modes_[id] = Mode::Normal;
  new_arrivals_.push_back(id);
}

void CScheduler::on_completion(const SimView& view, TaskId id, Actions&) {
  auto it = open_episode_.find(id);
  if (it != open_episode_.end()) {
    episodes_[it->second].exit = view.now();
    open_episode_.erase(it);
  }
  modes_[id] = Mode::Done;
}

void CScheduler::on_instant_end(const SimView& view, Actions& out) {
  const Rational& now = view.now();
  const int p = view.p();
  if (!inner_) inner_ = std::make_unique<Inner>(p, view.speed());

  const Rational dt = now - last_time_;
  if (dt.is_positive()) {
    for (const Theft& t : pending_thefts_) thefts_.push_back({t.thief, t.victim, t.amount * dt});
  }
  pending_thefts_.clear();
  last_time_ = now;

  for (TaskId id : new_arrivals_) {
    Task scaled = tasks_.at(id);
    scaled.sigma *= options_.inner_scale;
    scaled.pi *= options_.inner_scale;
    scaled.arrival = now;
    scaled.deps.clear();
    inner_->sim.add_task(std::move(scaled));
  }
  new_arrivals_.clear();
  inner_->sim.run_until(now);

  const auto& log = inner_->sched.log();
  for (; log_cursor_ < log.size(); ++log_cursor_) {
    const BScheduler::LogEntry& e = log[log_cursor_];
    const Mode m = modes_.at(e.id);
    if (e.kind == BScheduler::LogEntry::Kind::ToSerial) {
      if (m == Mode::Vested) {
        enter_mode(e.id, Mode::Ballistic, false, now);
      } else if (m == Mode::Normal) {
        enter_mode(e.id, Mode::SerialMirror, false, now);
        out.start(e.id, Decision::Serial);
      }
    } else {
      if (m == Mode::Vested) {
        enter_mode(e.id, Mode::Ballistic, true, now);
      } else if (m == Mode::Normal) {
        enter_mode(e.id, Mode::SemiBallistic, true, now);
        out.start(e.id, Decision::Serial);
      }
    }
  }

  // Emergency classes and the task that receives their parallel work.
  std::map<Rational, TaskId> thief;
  std::map<Rational, std::set<Rational>> sizes;
  for (const auto& [id, m] : modes_) {
    if (m != Mode::Ballistic) continue;
    const Task& t = tasks_.at(id);
    const Rational ratio = t.pi / t.sigma;
    if (!sizes[ratio].insert(t.sigma).second) {
      throw InvariantViolation("two ballistic tasks of class " + ratio.str() + " share serial work " + t.sigma.str());
    }
    auto it = thief.find(ratio);
    if (it == thief.end() || t.sigma < tasks_.at(it->second).sigma) thief[ratio] = id;
  }

  Allocation alloc;
  const SimView inner_view(inner_->sim, false);
  for (const auto& [id, rate] : inner_->sim.allocation()) {
    const Mode m = modes_.at(id);
    const auto d = inner_view.decision(id);
    if (d == Decision::Parallel) {
      if (m != Mode::Normal && m != Mode::Vested) continue;
      const Task& t = tasks_.at(id);
      auto th = thief.find(t.pi / t.sigma);
      if (th != thief.end()) {
        alloc.add(th->second, rate);
        pending_thefts_.push_back({th->second, id, rate});
        continue;
      }
      if (m == Mode::Normal) {
        out.start(id, Decision::Parallel);
        enter_mode(id, Mode::Vested, false, now);
      }
      alloc.add(id, rate);
    } else if (m == Mode::SerialMirror) {
      alloc.add(id, rate);
    }
  }

  Rational reserve_total;
  for (const auto& [ratio, id] : thief) {
    const Rational r = reserve_for(ratio, p);
    reserve_total += r;
    alloc.add(id, r);
  }
  max_reserve_ = max(max_reserve_, reserve_total);
  if (reserve_total > Rational(2 * p)) {
    throw InvariantViolation("class reserves exceed 2p: " + reserve_total.str());
  }

  std::vector<TaskId> semi;
  for (const auto& [id, m] : modes_) {
    if (m == Mode::SemiBallistic) semi.push_back(id);
  }
  for (const auto& [id, rate] : equi_alloc(semi, Rational(p), true)) alloc.add(id, rate);

  out.allocate(std::move(alloc));
  if (auto t = inner_->sim.next_event_time()) out.set_timer(*t, next_tag_++);
}

std::string CScheduler::annotations() const {
  using ojson = nlohmann::ordered_json;
  ojson eps = ojson::array();
  for (const Episode& e : episodes_) {
    eps.push_back({{"id", e.id},
                   {"mode", to_string(e.mode)},
                   {"hard", e.hard},
                   {"enter", e.enter.str()},
                   {"exit", e.exit ? ojson(e.exit->str()) : ojson(nullptr)}});
  }
  std::map<TaskId, Rational> per_victim;
  for (const Theft& t : thefts_) per_victim[t.victim] += t.amount;
  ojson stolen = ojson::array();
  for (const auto& [id, amount] : per_victim) stolen.push_back({{"victim", id}, {"amount", amount.str()}});
  ojson j;
  j["episodes"] = std::move(eps);
  j["stolen"] = std::move(stolen);
  j["max_reserve"] = max_reserve_.str();
  j["inner_cancellations"] = inner_cancellations();
  return j.dump();
}

}  // namespace taplab
