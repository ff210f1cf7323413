#include <taplab/adversaries.hpp>

#include <taplab/errors.hpp>
#include <taplab/generators.hpp>
#include <taplab/oracle.hpp>
#include <taplab/sched_awake.hpp>

namespace taplab {

Tap GoldenAdversary::initial() const { return Tap{p_, {Task{0, golden_hat(), Rational(p_), Rational(0), {}}}}; }

std::vector<Task> GoldenAdversary::observe(const SimView& view) {
  if (t0_ || !view.released(0)) return {};
  const auto& rec = view.trace().decisions;
  auto it = rec.find(0);
  if (it == rec.end() || it->second.decision != Decision::Parallel) return {};
  const Rational t0 = it->second.decision_time;
  if (!(t0 < Rational(1) / golden_hat())) return {};
  t0_ = t0;
  const Rational sigma = golden_hat() - t0;
  std::vector<Task> out;
  for (int k = 1; k < p_; ++k) {
    out.push_back(Task{k, sigma, sigma * Rational(p_), t0 + infinitesimal(), {}});
  }
  return out;
}

NonpreemptiveAdversary::NonpreemptiveAdversary(long r, Tap probe) : r_(r), probe_(std::move(probe)) {
  if (r_ < 0) throw InvalidArgument("R must be non-negative");
  h_ = opt_trt_lower(probe_);
  if (!h_.is_positive()) throw InvalidArgument("probe must have positive response-time bound");
}

std::vector<Task> NonpreemptiveAdversary::observe(const SimView& view) {
  if (trigger_time_) return {};
  const Allocation& alloc = view.allocation();
  const Rational busy = alloc.total();
  if (!busy.is_positive()) return {};
  bool all_long = true;
  for (const auto& [id, rate] : alloc) {
    if (view.remaining(id) < Rational(1)) all_long = false;
  }
  const bool record = busy > max_busy_;
  if (record) max_busy_ = busy;
  if (!all_long || !record) return {};
  trigger_time_ = view.now();
  std::vector<Task> out;
  if (r_ == 0) return out;
  TaskId next = 0;
  for (const Task& t : view.trace().tasks) next = std::max(next, t.id + 1);
  const auto count = to_int64((Rational(r_) * h_).ceil());
  for (std::int64_t k = 0; k < count; ++k) {
    out.push_back(Task{next++, tiny_work(), tiny_work(), view.now(), {}});
  }
  return out;
}

void RigidScheduler::on_arrival(const SimView&, TaskId, Actions&) {}

void RigidScheduler::on_instant_end(const SimView& view, Actions& out) {
  if (running_ && view.done(*running_)) running_.reset();
  if (!running_) {
    for (TaskId id : view.alive()) {
      running_ = id;
      out.start(id, Decision::Parallel);
      break;
    }
  }
  Allocation a;
  if (running_) a.set(*running_, view.budget());
  out.allocate(std::move(a));
}

Tap nonpreemptive_probe(int p) { return Tap{p, {Task{0, Rational(1), Rational(p), Rational(0), {}}}}; }

}  // namespace taplab
