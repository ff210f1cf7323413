#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <taplab/rational.hpp>
#include <taplab/task.hpp>

namespace taplab {

// Processor rates per task, kept sorted by id with strictly positive rates.
class Allocation {
 public:
  using Entry = std::pair<TaskId, Rational>;

  void add(TaskId id, const Rational& rate);
  void set(TaskId id, const Rational& rate);
  Rational rate(TaskId id) const;
  Rational total() const;
  bool empty() const { return rates_.empty(); }
  std::size_t size() const { return rates_.size(); }
  void erase(TaskId id);
  void clear() { rates_.clear(); }

  auto begin() const { return rates_.begin(); }
  auto end() const { return rates_.end(); }

  friend bool operator==(const Allocation&, const Allocation&) = default;

 private:
  std::vector<Entry> rates_;
};

struct Slice {
  Rational start;
  Rational end;
  Allocation alloc;

  friend bool operator==(const Slice&, const Slice&) = default;
};

struct DecisionRecord {
  Decision decision = Decision::Serial;
  Rational decision_time;
  std::optional<Rational> start_time;  // first instant with positive rate

  friend bool operator==(const DecisionRecord&, const DecisionRecord&) = default;
};

struct StartEvent {
  TaskId id = 0;
  Decision decision = Decision::Serial;
  Rational time;

  friend bool operator==(const StartEvent&, const StartEvent&) = default;
};

struct Trace {
  int p = 2;
  Rational speed{1};
  Rational budget;
  bool allow_cancel = false;
  std::vector<Task> tasks;                // including adversary injections
  std::map<TaskId, Rational> releases;    // when each task became available
  std::vector<Slice> slices;
  std::map<TaskId, DecisionRecord> decisions;  // final decision per task
  std::vector<StartEvent> starts;              // every start command, in order
  std::map<TaskId, Rational> completions;
  std::vector<std::pair<TaskId, Rational>> cancellations;
  std::uint64_t events = 0;
  std::string aux;  // scheduler annotations as a JSON document (may be empty)

  Rational horizon() const;
  Tap tap() const;
  bool complete() const { return completions.size() == tasks.size(); }
};

std::string trace_to_json(const Trace& trace);
// Hash of every recorded field; equal traces give equal digests.
std::uint64_t trace_digest(const Trace& trace);

}  // namespace taplab
