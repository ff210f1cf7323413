#include <taplab/engine.hpp>

#include <algorithm>
#include <map>

namespace taplab {

namespace {

// One execution attempt of a task: from a start command to the completion or
// cancellation that ended it (end unset while still open).
struct Run {
  Decision decision;
  Rational start;
  std::optional<Rational> end;
  bool completed = false;
  Rational work;  // integral of speed * rate over the run
};

}  // namespace

std::vector<std::string> validate_trace(const Trace& trace) {
  std::vector<std::string> out;
  auto violation = [&out](std::string msg) { out.push_back(std::move(msg)); };

  std::map<TaskId, const Task*> tasks;
  for (const Task& t : trace.tasks) {
    if (!tasks.emplace(t.id, &t).second) violation("duplicate task id " + std::to_string(t.id));
  }

  // Rebuild the run history of every task from starts, cancellations and completions.
  std::map<TaskId, std::vector<Run>> runs;
  {
    struct Mark {
      Rational time;
      int order;  // completion/cancel before start at equal times
      TaskId id;
      Decision decision;
      bool is_start;
      bool is_completion;
    };
    std::vector<Mark> marks;
    for (std::size_t k = 0; k < trace.starts.size(); ++k) {
      const auto& s = trace.starts[k];
      marks.push_back({s.time, 1, s.id, s.decision, true, false});
    }
    for (const auto& [id, t] : trace.cancellations) marks.push_back({t, 0, id, Decision::Serial, false, false});
    for (const auto& [id, t] : trace.completions) marks.push_back({t, 2, id, Decision::Serial, false, true});
    std::stable_sort(marks.begin(), marks.end(), [](const Mark& a, const Mark& b) {
      if (a.time != b.time) return a.time < b.time;
      return a.order < b.order;
    });
    for (const Mark& m : marks) {
      auto& list = runs[m.id];
      const std::string who = "task " + std::to_string(m.id);
      if (m.is_start) {
        if (!list.empty() && !list.back().end) violation(who + " started twice without cancellation");
        list.push_back(Run{m.decision, m.time, std::nullopt, false, Rational(0)});
      } else {
        if (list.empty() || list.back().end) {
          violation(who + (m.is_completion ? " completed" : " cancelled") + " without a running start");
          continue;
        }
        list.back().end = m.time;
        list.back().completed = m.is_completion;
      }
    }
  }

  // Slices: contiguous partition of [0, horizon), budget, serial cap, run windows.
  Rational cursor(0);
  for (std::size_t s = 0; s < trace.slices.size(); ++s) {
    const Slice& sl = trace.slices[s];
    const std::string where = "slice " + std::to_string(s) + " [" + sl.start.str() + "," + sl.end.str() + ")";
    if (sl.start != cursor) violation(where + " does not start where the previous slice ended");
    if (!(sl.start < sl.end)) violation(where + " is empty or reversed");
    cursor = sl.end;
    const Rational len = sl.end - sl.start;
    Rational total;
    for (const auto& [id, rate] : sl.alloc) {
      const std::string who = "task " + std::to_string(id);
      total += rate;
      if (!rate.is_positive()) violation(where + ": non-positive rate for " + who);
      auto t = tasks.find(id);
      if (t == tasks.end()) {
        violation(where + ": rate for unknown " + who);
        continue;
      }
      auto rel = trace.releases.find(id);
      if (rel == trace.releases.end() || sl.start < rel->second) violation(where + ": " + who + " runs before release");
      if (sl.start < t->second->arrival) violation(where + ": " + who + " runs before arrival");
      auto& list = runs[id];
      Run* owner = nullptr;
      for (Run& r : list) {
        if (r.start <= sl.start && (!r.end || sl.end <= *r.end)) owner = &r;
      }
      if (!owner) {
        violation(where + ": " + who + " receives rate outside any started run");
        continue;
      }
      if (owner->decision == Decision::Serial && rate > Rational(1)) violation(where + ": serial cap exceeded by " + who);
      owner->work += trace.speed * rate * len;
    }
    if (total > trace.budget) violation(where + ": processor budget exceeded (" + total.str() + ")");
  }

  // Work conservation and completeness.
  for (const auto& [id, task] : tasks) {
    const std::string who = "task " + std::to_string(id);
    auto& list = runs[id];
    auto done = trace.completions.find(id);
    if (done == trace.completions.end()) {
      violation(who + " never completes");
    }
    for (const Run& r : list) {
      const Rational& need = r.decision == Decision::Serial ? task->sigma : task->pi;
      if (r.completed && r.work != need) {
        violation(who + ": completed with work " + r.work.str() + " but needs " + need.str());
      }
      if (r.end && !r.completed && r.work >= need) violation(who + ": cancelled after finishing its work");
      if (!r.end && r.work > need) violation(who + ": over-allocated");
    }
    if (done != trace.completions.end()) {
      if (list.empty() || !list.back().completed) violation(who + ": completion without a finished run");
      auto rel = trace.releases.find(id);
      if (rel != trace.releases.end() && done->second < rel->second) violation(who + " completes before release");
    }
    auto rec = trace.decisions.find(id);
    if (!list.empty() && !list.back().end) {
      if (rec == trace.decisions.end() || rec->second.decision != list.back().decision) {
        violation(who + ": decision record disagrees with start history");
      }
    }
    if (!list.empty() && list.back().completed) {
      if (rec == trace.decisions.end() || rec->second.decision != list.back().decision) {
        violation(who + ": decision record disagrees with start history");
      }
    }
    // Dependencies must be complete before release.
    auto rel = trace.releases.find(id);
    if (rel != trace.releases.end()) {
      if (rel->second < task->arrival) violation(who + " released before its arrival");
      for (TaskId d : task->deps) {
        auto dc = trace.completions.find(d);
        if (dc == trace.completions.end() || rel->second < dc->second) {
          violation(who + " released before dependency " + std::to_string(d) + " completed");
        }
      }
    }
  }

  if (!trace.allow_cancel) {
    if (!trace.cancellations.empty()) violation("cancellations present with cancelling disabled");
    for (const auto& [id, list] : runs) {
      if (list.size() > 1) violation("task " + std::to_string(id) + " decided more than once");
    }
  }
  return out;
}

std::vector<std::string> validate_trace(const Trace& trace, const Tap& tap, const EngineConfig& config) {
  std::vector<std::string> out = validate_trace(trace);
  if (trace.p != tap.p) out.push_back("trace processor count differs from instance");
  if (trace.speed != config.speed) out.push_back("trace speed differs from config");
  if (trace.budget != config.budget_for(tap.p)) out.push_back("trace budget differs from config");
  if (trace.allow_cancel != config.allow_cancel) out.push_back("trace cancel flag differs from config");
  if (trace.tasks.size() < tap.tasks.size()) {
    out.push_back("trace is missing instance tasks");
  } else {
    for (std::size_t k = 0; k < tap.tasks.size(); ++k) {
      if (!(trace.tasks[k] == tap.tasks[k])) out.push_back("task " + std::to_string(tap.tasks[k].id) + " altered in trace");
    }
  }
  return out;
}

}  // namespace taplab
