#include <taplab/sched_mrt.hpp>

#include <algorithm>

#include <json.hpp>

#include <taplab/errors.hpp>

namespace taplab {

void BScheduler::ensure_model(const SimView& view) {
  if (model_) return;
  pool_ = pool_size_ ? *pool_size_ : Rational(view.p());
  model_ = std::make_unique<ParallelPoolModel>(pool_, view.speed());
}

void BScheduler::on_arrival(const SimView& view, TaskId id, Actions&) {
  if (!view.allow_cancel()) throw ContractError("bsched requires cancelling to be enabled");
  ensure_model(view);
  const Task& t = view.task(id);
  const TypeKey key = type_of(t);
  types_.emplace(id, key);
  queues_[key].push_back(id);
  model_->add(t, view.now());
}

void BScheduler::on_completion(const SimView& view, TaskId id, Actions&) {
  if (running_.erase(id)) {
    auto& q = queues_[types_.at(id)];
    q.erase(std::find(q.begin(), q.end(), id));
    log_.push_back({LogEntry::Kind::ParallelComplete, id, view.now()});
  }
  serial_pool_.erase(std::remove(serial_pool_.begin(), serial_pool_.end(), id), serial_pool_.end());
}

void BScheduler::on_instant_end(const SimView& view, Actions& out) {
  ensure_model(view);
  const Rational& now = view.now();
  const Rational dt = now - last_time_;
  if (dt.is_positive()) {
    for (Fake& f : fakes_) {
      f.remaining -= view.speed() * last_fake_rates_.rate(static_cast<TaskId>(f.key)) * dt;
      if (f.remaining.is_negative()) throw ContractError("fake task overshot its completion");
    }
    fakes_.erase(std::remove_if(fakes_.begin(), fakes_.end(), [](const Fake& f) { return f.remaining.is_zero(); }),
                 fakes_.end());
  }
  last_time_ = now;

  model_->advance(now);
  const auto events = model_->process();
  for (TaskId shadow : events.aged_out) {
    const TypeKey key = types_.at(shadow);
    auto& q = queues_[key];
    if (q.size() >= 2) {
      const TaskId victim = q.back();
      q.pop_back();
      out.start(victim, Decision::Serial);
      serial_pool_.push_back(victim);
      log_.push_back({LogEntry::Kind::ToSerial, victim, now});
    } else if (q.size() == 1) {
      const TaskId victim = q.front();
      q.clear();
      if (running_.erase(victim)) out.cancel(victim);
      out.start(victim, Decision::Serial);
      serial_pool_.push_back(victim);
      log_.push_back({LogEntry::Kind::ToSerial, victim, now});
    } else {
      fakes_.push_back(Fake{next_fake_++, key, key.sigma});
      ++fakes_created_;
    }
  }

  std::map<TypeKey, Rational> type_rate;
  for (const auto& [id, m] : model_->members()) {
    if (m.shadow_alive) type_rate[types_.at(id)] += model_->share();
  }

  Allocation alloc;
  std::map<TypeKey, std::size_t> per_type;
  for (auto& [key, q] : queues_) {
    if (q.empty()) continue;
    const TaskId front = q.front();
    if (!running_.count(front)) {
      out.start(front, Decision::Parallel);
      running_.insert(front);
    }
    ++per_type[key];
    auto it = type_rate.find(key);
    if (it != type_rate.end()) alloc.set(front, it->second);
  }
  for (const auto& [key, count] : per_type) max_per_type_ = std::max(max_per_type_, count);

  const std::size_t k = serial_pool_.size() + fakes_.size();
  last_fake_rates_.clear();
  if (k > 0) {
    const Rational share = min(Rational(1), pool_ / Rational(static_cast<long>(k)));
    for (TaskId id : serial_pool_) alloc.set(id, share);
    for (const Fake& f : fakes_) {
      last_fake_rates_.set(static_cast<TaskId>(f.key), share);
      out.set_timer(now + f.remaining / (view.speed() * share), next_tag_++);
    }
  }
  out.allocate(std::move(alloc));
  if (auto t = model_->next_event()) out.set_timer(*t, next_tag_++);
}

std::string BScheduler::annotations() const {
  nlohmann::ordered_json log = nlohmann::ordered_json::array();
  for (const LogEntry& e : log_) {
    log.push_back({{"kind", e.kind == LogEntry::Kind::ToSerial ? "to_serial" : "parallel_complete"},
                   {"id", e.id},
                   {"time", e.time.str()}});
  }
  nlohmann::ordered_json j;
  j["log"] = std::move(log);
  j["fakes"] = fakes_created_;
  j["max_parallel_per_type"] = max_per_type_;
  return j.dump();
}

}  // namespace taplab
