#include <taplab/metrics.hpp>

#include <algorithm>
#include <optional>

#include <taplab/errors.hpp>

namespace taplab {

Rational union_measure(std::vector<std::pair<Rational, Rational>> intervals) {
  std::sort(intervals.begin(), intervals.end());
  Rational total;
  std::optional<Rational> lo, hi;
  for (auto& [a, b] : intervals) {
    if (!(a < b)) continue;
    if (hi && a <= *hi) {
      if (*hi < b) hi = b;
      continue;
    }
    if (hi) total += *hi - *lo;
    lo = a;
    hi = b;
  }
  if (hi) total += *hi - *lo;
  return total;
}

Metrics metrics_from_trace(const Trace& trace) {
  Metrics m;
  m.n = trace.tasks.size();
  std::vector<std::pair<Rational, Rational>> alive;
  for (const Task& t : trace.tasks) {
    auto done = trace.completions.find(t.id);
    if (done == trace.completions.end()) {
      throw IncompleteTrace("task " + std::to_string(t.id) + " did not complete");
    }
    auto rel = trace.releases.find(t.id);
    const Rational start = rel == trace.releases.end() ? t.arrival : rel->second;
    alive.emplace_back(start, done->second);
    const Rational response = done->second - t.arrival;
    m.trt += response;
    m.per_task_response[t.id] = response;
    m.completion_times[t.id] = done->second;
  }
  m.awake = union_measure(std::move(alive));
  if (m.n > 0) m.mrt = m.trt / Rational(static_cast<long>(m.n));
  return m;
}

}  // namespace taplab
