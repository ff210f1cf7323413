#pragma once

#include <optional>
#include <vector>

#include <taplab/rational.hpp>
#include <taplab/task.hpp>
#include <taplab/trace.hpp>

namespace taplab {

struct WorkItem {
  TaskId id = 0;
  Rational remaining;
};

struct MwfPlan {
  Allocation alloc;
  // Time until two serial groups with different rates reach equal remaining
  // work; the plan must be recomputed then.
  std::optional<Rational> crossing;
};

// Fluid most-work-first: serial jobs are grouped by remaining work and served
// from the largest down, one processor each; a group that cannot be fully
// served shares what is left equally. Leftover budget goes to the parallel job
// with the lowest id.
MwfPlan most_work_first(const std::vector<WorkItem>& serial, const std::vector<WorkItem>& parallel,
                        const Rational& budget, const Rational& speed = Rational(1));

Allocation most_work_first_alloc(const std::vector<WorkItem>& serial, const std::vector<WorkItem>& parallel,
                                 const Rational& budget);

}  // namespace taplab
