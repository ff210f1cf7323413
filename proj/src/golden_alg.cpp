#include <algorithm>

#include <taplab/errors.hpp>
#include <taplab/oracle.hpp>
#include <taplab/sched_awake.hpp>

namespace taplab {

void GoldenAlgScheduler::on_arrival(const SimView& view, TaskId id, Actions& out) {
  arrived_.push_back(view.task(id));
  if (arrived_.size() > kMaxOracleTasks) {
    throw SchedulerUnavailable("golden scheduler needs the offline optimum of " + std::to_string(arrived_.size()) +
                               " tasks, beyond its limit of " + std::to_string(kMaxOracleTasks));
  }
  parallel_pool_.push_back(id);
  Tap prefix{view.p(), arrived_};
  const Rational threshold = golden_hat() * opt_awake_exhaustive(prefix, kMaxOracleTasks).value;
  const Rational t = view.awake_so_far();
  std::vector<TaskId> keep;
  for (TaskId w : parallel_pool_) {
    if (view.sigma(w) + t < threshold) {
      out.start(w, Decision::Serial);
    } else {
      keep.push_back(w);
    }
  }
  parallel_pool_ = std::move(keep);
}

void GoldenAlgScheduler::before_allocate(const SimView& view, Actions& out) {
  if (parallel_pool_.empty()) return;
  for (TaskId id : view.alive()) {
    if (view.decision(id) == Decision::Parallel) return;
  }
  start_now(out, parallel_pool_.front(), Decision::Parallel);
  parallel_pool_.erase(parallel_pool_.begin());
}

}  // namespace taplab
