#include <taplab/task.hpp>

#include <algorithm>
#include <unordered_map>
#include <unordered_set>

#include <taplab/errors.hpp>

namespace taplab {

const char* to_string(Decision d) { return d == Decision::Serial ? "serial" : "parallel"; }

bool Tap::has_deps() const {
  return std::any_of(tasks.begin(), tasks.end(), [](const Task& t) { return !t.deps.empty(); });
}

Task normalize_task(const Task& task, int p) {
  if (!task.sigma.is_positive() || !task.pi.is_positive()) {
    throw InvalidInstance("task " + std::to_string(task.id) + " has non-positive work");
  }
  Task out = task;
  out.sigma = min(task.sigma, task.pi);
  out.pi = min(task.pi, Rational(p) * out.sigma);
  return out;
}

Tap normalize_tap(const Tap& tap) {
  Tap out{tap.p, {}};
  out.tasks.reserve(tap.tasks.size());
  for (const Task& t : tap.tasks) out.tasks.push_back(normalize_task(t, tap.p));
  return out;
}

std::vector<std::size_t> topological_order(const Tap& tap) {
  std::unordered_map<TaskId, std::size_t> index;
  for (std::size_t k = 0; k < tap.tasks.size(); ++k) index.emplace(tap.tasks[k].id, k);
  std::vector<std::size_t> indegree(tap.tasks.size(), 0);
  std::vector<std::vector<std::size_t>> dependents(tap.tasks.size());
  for (std::size_t k = 0; k < tap.tasks.size(); ++k) {
    for (TaskId d : tap.tasks[k].deps) {
      auto it = index.find(d);
      if (it == index.end()) {
        throw InvalidInstance("task " + std::to_string(tap.tasks[k].id) + " depends on unknown id " +
                              std::to_string(d));
      }
      dependents[it->second].push_back(k);
      ++indegree[k];
    }
  }
  std::vector<std::size_t> order;
  std::vector<std::size_t> ready;
  for (std::size_t k = 0; k < tap.tasks.size(); ++k) {
    if (indegree[k] == 0) ready.push_back(k);
  }
  while (!ready.empty()) {
    std::size_t k = ready.back();
    ready.pop_back();
    order.push_back(k);
    for (std::size_t m : dependents[k]) {
      if (--indegree[m] == 0) ready.push_back(m);
    }
  }
  if (order.size() != tap.tasks.size()) throw InvalidInstance("cyclic dependencies");
  return order;
}

void validate_tap(const Tap& tap) {
  if (tap.p < 2) throw InvalidInstance("processor count must be at least 2");
  std::unordered_set<TaskId> ids;
  const Rational p(tap.p);
  for (std::size_t k = 0; k < tap.tasks.size(); ++k) {
    const Task& t = tap.tasks[k];
    const std::string who = "task " + std::to_string(t.id);
    if (t.id < 0) throw InvalidInstance(who + ": negative id");
    if (!ids.insert(t.id).second) throw InvalidInstance(who + ": duplicate id");
    if (!t.sigma.is_positive()) throw InvalidInstance(who + ": sigma must be positive");
    if (t.pi < t.sigma) throw InvalidInstance(who + ": pi below sigma");
    if (t.pi > p * t.sigma) throw InvalidInstance(who + ": pi above p*sigma");
    if (t.arrival.is_negative()) throw InvalidInstance(who + ": negative arrival");
    if (k > 0 && t.arrival < tap.tasks[k - 1].arrival) {
      throw InvalidInstance(who + ": arrivals out of order");
    }
    for (TaskId d : t.deps) {
      if (d == t.id) throw InvalidInstance("cyclic dependencies");
    }
  }
  if (tap.has_deps()) topological_order(tap);
}

Tap scale_tap(const Tap& tap, const Rational& c) {
  if (c < Rational(1)) throw InvalidArgument("scale factor must be at least 1");
  Tap out = tap;
  for (Task& t : out.tasks) {
    t.sigma *= c;
    t.pi *= c;
  }
  return out;
}

Tap round_pow2(const Tap& tap) {
  Tap out = tap;
  const Rational cap = floor_pow2(Rational(tap.p));
  for (Task& t : out.tasks) {
    t.sigma = ceil_pow2(t.sigma);
    t.pi = ceil_pow2(t.pi);
    // Only reachable when p is not a power of two; raise sigma so no work shrinks.
    if (t.pi > cap * t.sigma) t.sigma = t.pi / cap;
  }
  return out;
}

bool is_pow2_rounded(const Tap& tap) {
  return std::all_of(tap.tasks.begin(), tap.tasks.end(),
                     [](const Task& t) { return is_pow2(t.sigma) && is_pow2(t.pi); });
}

TaskType task_type(const Task& task) {
  if (!is_pow2(task.sigma) || !is_pow2(task.pi)) {
    throw ContractError("task " + std::to_string(task.id) + " is not power-of-two rounded");
  }
  const long i = log2_exact(task.sigma);
  return TaskType{log2_exact(task.pi) - i, i};
}

}  // namespace taplab
