#include <taplab/sched_mrt.hpp>

#include <algorithm>

#include <json.hpp>

#include <taplab/errors.hpp>

namespace taplab {

void CancScheduler::ensure_model(const SimView& view) {
  if (!model_) {
    model_ = std::make_unique<ParallelPoolModel>(pool_size_ ? *pool_size_ : Rational(view.p()), view.speed());
  }
}

void CancScheduler::on_arrival(const SimView& view, TaskId id, Actions& out) {
  if (!view.allow_cancel()) throw ContractError("canc requires cancelling to be enabled");
  ensure_model(view);
  out.start(id, Decision::Parallel);
  model_->add(view.task(id), view.now());
}

void CancScheduler::on_instant_end(const SimView& view, Actions& out) {
  ensure_model(view);
  const Rational& now = view.now();
  model_->advance(now);
  const auto events = model_->process();
  for (TaskId id : events.shadow_done) {
    if (!view.done(id)) throw InvariantViolation("pool model finished task " + std::to_string(id) + " before the engine");
  }
  for (TaskId id : events.aged_out) {
    out.cancel(id);
    out.start(id, Decision::Serial);
    serial_pool_.push_back(id);
    cancelled_.push_back({id, now, now - view.release_time(id)});
  }
  serial_pool_.erase(std::remove_if(serial_pool_.begin(), serial_pool_.end(),
                                    [&view](TaskId id) { return view.done(id); }),
                     serial_pool_.end());

  Allocation alloc;
  const Rational x = model_->share();
  for (const auto& [id, m] : model_->members()) {
    if (!m.shadow_alive) continue;
    if (view.remaining(id) != m.task.pi - m.shadow_work) {
      throw InvariantViolation("engine and pool model disagree on task " + std::to_string(id));
    }
    alloc.set(id, x);
  }
  const Rational pool = pool_size_ ? *pool_size_ : Rational(view.p());
  for (const auto& [id, rate] : equi_alloc(serial_pool_, pool, true)) alloc.set(id, rate);
  out.allocate(std::move(alloc));
  if (auto t = model_->next_event()) out.set_timer(*t, 0);
}

std::string CancScheduler::annotations() const {
  nlohmann::ordered_json c = nlohmann::ordered_json::array();
  for (const Cancellation& k : cancelled_) {
    c.push_back({{"id", k.id}, {"time", k.time.str()}, {"pool_age", k.pool_age.str()}});
  }
  return nlohmann::ordered_json{{"cancellations", std::move(c)}}.dump();
}

}  // namespace taplab
