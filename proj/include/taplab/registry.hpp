#pragma once

#include <memory>
#include <optional>
#include <string>
#include <vector>

#include <taplab/engine.hpp>
#include <taplab/metrics.hpp>

namespace taplab {

struct SchedulerInfo {
  std::string name;
  Rational default_budget_factor{1};
  bool requires_cancel = false;
  bool rounds_pow2 = false;  // instance is rounded to powers of two before the run
};

const std::vector<SchedulerInfo>& scheduler_catalog();
std::vector<std::string> scheduler_names();
// Throws InvalidArgument for unknown names.
const SchedulerInfo& scheduler_info(const std::string& name);

struct RunConfig {
  std::string scheduler;
  Rational speed{1};
  std::optional<Rational> budget_factor;  // processors per p; scheduler default if unset
  bool allow_cancel = false;
  Rational inner_scale{3};
  bool literal_reserve = false;
};

std::unique_ptr<Scheduler> make_scheduler(const RunConfig& config);

struct RunResult {
  Tap instance;  // as simulated (after rounding when the scheduler needs it)
  Trace trace;
  Metrics metrics;
  std::vector<std::string> violations;
  Rational budget_factor;
  // Total resource advantage over a unit-speed p-processor optimum.
  Rational augmentation;
};

// Checks the configuration, prepares the instance, simulates and validates.
// Infeasible configurations throw FeasibilityError.
RunResult run_scheduler(const Tap& tap, const RunConfig& config, Adversary* adversary = nullptr);

std::vector<std::string> adversary_names();

struct DuelResult {
  std::string objective;  // "awake" or "trt"
  RunResult run;
  Rational cost;
  Rational opt;        // optimum or an upper bound on it (awake), lower bound (trt)
  bool opt_exact = false;
  Rational ratio;      // cost / opt
  bool injected = false;
};

// Runs a scheduler against an adaptive adversary. "golden" measures awake time
// against the best of several explicit schedules (exact optimum when small);
// "nonpreemptive" measures total response time against the response-time lower
// bound, R tiny tasks per unit of that bound being injected.
DuelResult run_duel(const std::string& adversary, int p, const RunConfig& config, long r = 10);

}  // namespace taplab
