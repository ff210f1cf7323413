#pragma once

#include <cstddef>
#include <map>
#include <optional>
#include <utility>
#include <vector>

#include <taplab/rational.hpp>
#include <taplab/task.hpp>

namespace taplab {

// Awake time of the greedy most-work-first schedule with fixed decisions
// (indexed like tap.tasks). Plain TAPs only.
Rational opt_awake_given_decisions(const Tap& tap, const std::vector<Decision>& decisions);
Rational opt_awake_given_decisions(const Tap& tap, const std::map<TaskId, Decision>& decisions);

struct OptAwake {
  Rational value;
  std::vector<Decision> decisions;  // a minimizing vector, lexicographically first
  bool exact = true;                // false for dependency instances (upper bound)
};

inline constexpr std::size_t kDefaultOracleBound = 20;

// Minimum over all decision vectors. Vectors are ordered with the first task
// most significant and Serial before Parallel. Instances with dependencies are
// evaluated by list scheduling in the engine and flagged as upper bounds.
OptAwake opt_awake_exhaustive(const Tap& tap, std::size_t max_tasks = kDefaultOracleBound);

// Lower bound on total response time: the larger of the sum of fastest
// possible durations and the total response time of preemptive
// shortest-remaining-first on a perfectly scalable relaxation. capacity is the
// total processing rate available (defaults to p) and speed the rate of one
// processor.
Rational opt_trt_lower(const Tap& tap, const std::optional<Rational>& capacity = std::nullopt,
                       const Rational& speed = Rational(1));

// Total response time of preemptive SRPT for jobs (release, work) on one
// machine of the given rate.
Rational srpt_trt(std::vector<std::pair<Rational, Rational>> jobs, const Rational& rate);

enum class Objective { Awake, Trt };

struct GridLimits {
  std::size_t max_tasks = 4;
  std::size_t max_steps = 20000;     // total work divided by the grid
  std::size_t max_states = 2000000;  // frontier size per step
};

// Exhaustive search over decisions and integer processor splits on a time grid.
// An upper bound on the optimum; exact for awake time on grid-aligned inputs.
Rational grid_opt(const Tap& tap, Objective objective, const Rational& grid, const GridLimits& limits = {});

// Grid on which the most-work-first schedule for the given decisions is
// aligned: every event time and every per-slice work amount is a multiple of it.
Rational mwf_alignment_grid(const Tap& tap, const std::vector<Decision>& decisions);

}  // namespace taplab
