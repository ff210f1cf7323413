#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include <taplab/registry.hpp>

namespace taplab::cli {

// Entry point shared by the binary and the tests. Returns the exit code.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

// Seed from TAPLAB_SEED when set, else the fallback.
std::uint64_t default_seed(std::uint64_t fallback);

// JSON record of a single run.
std::string run_record(const RunResult& result, const RunConfig& config);

enum class OracleMode { Exact, Skip };

struct SweepRow {
  std::string instance;
  std::string scheduler;
  int p = 0;
  std::size_t n = 0;
  std::optional<Rational> awake, trt, opt_awake, trt_lb, ratio_awake, ratio_trt_lb, max_ballistic_over_2sigma;
  std::vector<std::string> violations;
  std::string warning;  // non-empty marks a warning row
};

struct NamedTap {
  std::string label;
  Tap tap;
};

// One row per (instance, scheduler) in input order, computed on `threads` workers.
std::vector<SweepRow> sweep(const std::vector<NamedTap>& corpus, const std::vector<std::string>& schedulers,
                            const RunConfig& base, OracleMode oracle, unsigned threads);
std::string sweep_csv(const std::vector<SweepRow>& rows);

}  // namespace taplab::cli
