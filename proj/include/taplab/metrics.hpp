#pragma once

#include <map>
#include <utility>
#include <vector>

#include <taplab/rational.hpp>
#include <taplab/task.hpp>
#include <taplab/trace.hpp>

namespace taplab {

struct Metrics {
  std::size_t n = 0;
  Rational awake;
  Rational trt;
  Rational mrt;
  std::map<TaskId, Rational> per_task_response;
  std::map<TaskId, Rational> completion_times;
};

// Awake time counts the union of the intervals during which some released task
// is unfinished. Throws IncompleteTrace if any task never completed.
Metrics metrics_from_trace(const Trace& trace);

// Measure of a union of half-open intervals.
Rational union_measure(std::vector<std::pair<Rational, Rational>> intervals);

}  // namespace taplab
