// Acceptance gate: one PASS/FAIL line per criterion, nonzero exit on any failure.

#include <chrono>
#include <cstdlib>
#include <iostream>
#include <string>

#include "padicq/acceptance.hpp"

namespace acc = padicq::acceptance;

int main() {
  const auto t0 = std::chrono::steady_clock::now();
  auto results = acc::run_suite(false);
  const double full = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();

  // End-to-end: the CLI's quick verification, timed as a separate process.
  const std::string cmd = std::string("\"") + PADICQ_CLI_PATH + "\" verify --quick > /dev/null";
  const auto t1 = std::chrono::steady_clock::now();
  const int rc = std::system(cmd.c_str());
  const double quick = std::chrono::duration<double>(std::chrono::steady_clock::now() - t1).count();

  acc::CriterionResult timing;
  timing.id = 15;
  timing.name = "verify --quick < 60 s, full suite < 10 min";
  timing.deviation = quick;
  timing.tolerance = 60.0;
  timing.passed = rc == 0 && quick < 60.0 && full < 600.0;
  timing.detail = "quick " + std::to_string(quick) + " s (exit " + std::to_string(rc) + "), full " +
                  std::to_string(full) + " s";
  timing.seconds = quick;
  results.push_back(timing);

  acc::print_table(std::cout, results);
  int failed = 0;
  for (const auto& r : results) failed += r.passed ? 0 : 1;
  std::cout << results.size() - static_cast<std::size_t>(failed) << "/" << results.size() << " criteria passed\n";
  return failed == 0 ? 0 : 1;
}
