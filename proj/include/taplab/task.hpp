#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include <taplab/rational.hpp>

namespace taplab {

using TaskId = std::int64_t;

enum class Decision { Serial, Parallel };

const char* to_string(Decision d);

struct Task {
  TaskId id = 0;
  Rational sigma;    // serial work
  Rational pi;       // parallel work
  Rational arrival;
  std::vector<TaskId> deps;

  friend bool operator==(const Task&, const Task&) = default;
};

// A task arrival process: processor count plus tasks ordered by arrival.
struct Tap {
  int p = 2;
  std::vector<Task> tasks;

  std::size_t size() const { return tasks.size(); }
  bool empty() const { return tasks.empty(); }
  bool has_deps() const;

  friend bool operator==(const Tap&, const Tap&) = default;
};

// Power-of-two signature of a rounded task: 2^i = sigma, 2^(i+j) = pi.
struct TaskType {
  long j = 0;
  long i = 0;

  friend auto operator<=>(const TaskType&, const TaskType&) = default;
};

Task normalize_task(const Task& task, int p);
Tap normalize_tap(const Tap& tap);

// Throws InvalidInstance describing the first broken invariant.
void validate_tap(const Tap& tap);

Tap scale_tap(const Tap& tap, const Rational& c);
Tap round_pow2(const Tap& tap);
bool is_pow2_rounded(const Tap& tap);
TaskType task_type(const Task& task);

// Indices of tasks in an order where every dependency precedes its dependents.
// Throws InvalidInstance on cycles or unknown ids.
std::vector<std::size_t> topological_order(const Tap& tap);

}  // namespace taplab
