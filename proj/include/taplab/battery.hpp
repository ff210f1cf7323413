#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

namespace taplab {

inline constexpr std::uint64_t kDefaultBatterySeed = 20250117;

struct CriterionResult {
  std::string id;     // "A1" ... "A12"
  std::string group;  // oracle, awake, mrt, dtap, determinism
  std::string title;
  bool passed = false;
  std::string detail;   // measured values, exact where possible
  std::string witness;  // instance JSON of the first failure, if any
  std::size_t instances = 0;
  std::size_t traces = 0;
  double seconds = 0;
};

struct BatteryOptions {
  std::uint64_t seed = kDefaultBatterySeed;
  // Group name or criterion id; empty runs everything.
  std::string only;
  // Runs the balance criterion against the scheduler with its balance test inverted.
  bool mutant_bal = false;
  // Worker threads; 0 uses the hardware concurrency.
  unsigned threads = 0;
};

std::vector<std::string> battery_groups();

struct BatteryReport {
  std::vector<CriterionResult> results;
  double seconds = 0;
  bool passed() const;
};

// Results are delivered in criterion order regardless of the order in which
// workers finish.
BatteryReport run_battery(const BatteryOptions& options,
                          const std::function<void(const CriterionResult&)>& on_result = {});

// One line: id, PASS/FAIL, title, detail and runtime.
std::string format_result(const CriterionResult& r);

}  // namespace taplab
