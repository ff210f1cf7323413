// Acceptance battery: one line per criterion, nonzero exit on any failure.
#include <cstdlib>
#include <iostream>
#include <string>

#include <taplab/battery.hpp>

int main(int argc, char** argv) {
  taplab::BatteryOptions options;
  if (const char* s = std::getenv("TAPLAB_SEED")) options.seed = std::stoull(s);
  if (argc > 1) options.only = argv[1];
  const auto report = taplab::run_battery(options, [](const taplab::CriterionResult& r) {
    std::cout << taplab::format_result(r) << std::endl;
  });
  std::cout << (report.passed() ? "all criteria passed" : "some criteria failed") << " in "
            << static_cast<int>(report.seconds) << " s" << std::endl;
  return report.passed() ? 0 : 1;
}
