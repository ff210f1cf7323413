#include <taplab/sched_mrt.hpp>

namespace taplab {

Allocation equi_alloc(const std::vector<TaskId>& jobs, const Rational& budget, bool serial_cap) {
  Allocation a;
  if (jobs.empty() || !budget.is_positive()) return a;
  Rational share = budget / Rational(static_cast<long>(jobs.size()));
  if (serial_cap) share = min(share, Rational(1));
  for (TaskId id : jobs) a.set(id, share);
  return a;
}

void EquiScheduler::on_arrival(const SimView&, TaskId id, Actions& out) { out.start(id, decision_); }

void EquiScheduler::on_instant_end(const SimView& view, Actions& out) {
  out.allocate(equi_alloc(view.alive(), view.budget(), decision_ == Decision::Serial));
}

}  // namespace taplab
