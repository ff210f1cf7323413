#include <taplab/parallel_pool.hpp>

#include <taplab/errors.hpp>

namespace taplab {

Rational relaxed_rate(const RelaxedJob& job, const Rational& x) {
  if (x.is_negative()) throw ContractError("negative processor count");
  if (x.is_zero()) return Rational(0);
  if (x < job.threshold) return Rational(1);
  return x / job.threshold;
}

ParallelPoolModel::ParallelPoolModel(Rational pool_size, Rational speed)
    : pool_size_(std::move(pool_size)), speed_(std::move(speed)) {}

void ParallelPoolModel::add(const Task& task, const Rational& now) {
  advance(now);
  Member m;
  m.task = task;
  m.entry = now;
  m.relaxed = RelaxedJob{task.id, Rational(2) * task.sigma, task.pi / task.sigma, Rational(0)};
  if (!members_.emplace(task.id, std::move(m)).second) {
    throw ContractError("task " + std::to_string(task.id) + " entered the parallel pool twice");
  }
}

Rational ParallelPoolModel::share() const {
  if (members_.empty()) return Rational(0);
  return pool_size_ / Rational(static_cast<long>(members_.size()));
}

void ParallelPoolModel::advance(const Rational& now) {
  if (now < now_) throw ContractError("pool model cannot move backwards");
  const Rational dt = now - now_;
  now_ = now;
  if (dt.is_zero() || members_.empty()) return;
  const Rational x = share();
  for (auto& [id, m] : members_) {
    m.relaxed.progress += speed_ * relaxed_rate(m.relaxed, x) * dt;
    if (m.shadow_alive) m.shadow_work += speed_ * x * dt;
    if (m.relaxed.progress > m.relaxed.total_work || m.shadow_work > m.task.pi) {
      throw ContractError("pool model overshot an event of task " + std::to_string(id));
    }
  }
}

ParallelPoolModel::Events ParallelPoolModel::process() {
  Events ev;
  for (auto& [id, m] : members_) {
    if (m.shadow_alive && m.shadow_work == m.task.pi) {
      m.shadow_alive = false;
      ev.shadow_done.push_back(id);
    }
  }
  for (auto it = members_.begin(); it != members_.end();) {
    Member& m = it->second;
    if (m.relaxed.progress == m.relaxed.total_work) {
      if (m.shadow_alive) {
        throw InvariantViolation("relaxed job of task " + std::to_string(it->first) +
                                 " finished while the task still had parallel work left");
      }
      it = members_.erase(it);
      continue;
    }
    if (now_ >= m.entry + m.task.sigma) {
      if (m.shadow_alive) ev.aged_out.push_back(it->first);
      it = members_.erase(it);
      continue;
    }
    ++it;
  }
  return ev;
}

std::optional<Rational> ParallelPoolModel::next_event() const {
  std::optional<Rational> best;
  auto consider = [&best](const Rational& t) {
    if (!best || t < *best) best = t;
  };
  const Rational x = share();
  for (const auto& [id, m] : members_) {
    consider(m.entry + m.task.sigma);
    const Rational r = relaxed_rate(m.relaxed, x);
    if (r.is_positive()) consider(now_ + (m.relaxed.total_work - m.relaxed.progress) / (speed_ * r));
    if (m.shadow_alive && x.is_positive()) consider(now_ + (m.task.pi - m.shadow_work) / (speed_ * x));
  }
  return best;
}

}  // namespace taplab
